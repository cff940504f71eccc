#include "pglcr/report.hpp"

#include <cstdio>

#include "pglcr/error.hpp"

namespace pglcr::report {

namespace {

json images(const Permutation& v) {
  json a = json::array();
  for (const auto y : v.images()) a.push_back(y);
  return a;
}

json triple(const Triple& t) { return json::array({t[0], t[1], t[2]}); }

json lemma(const LemmaStatus& s) { return {{"pass", s.pass}, {"detail", s.detail}}; }

} // namespace

const char* strategy_name(SearchStrategy s) {
  return s == SearchStrategy::prefix_dfs ? "prefix_dfs" : "candidate_scan";
}

json tower_summary(const gf::FieldTower& t, std::uint32_t rho_selector) {
  json j;
  j["p"] = t.p();
  j["f"] = t.f();
  j["q"] = t.q();
  j["field_order"] = t.size();
  j["modulus"] = t.modulus();
  j["primitive_index"] = t.primitive().index();
  j["primitive_text"] = t.to_string(t.primitive());
  j["rho_selector"] = rho_selector;
  if (t.q() % 2 == 1) {
    const auto rho = t.rho(rho_selector);
    j["rho_index"] = rho.index();
    j["rho_text"] = t.to_string(rho);
    j["rho_choices"] = t.rho_choices();
    std::uint64_t delta = 0;
    for (std::uint32_t i = 1; i < t.size(); ++i)
      delta += t.pow(gf::Element{i}, std::uint64_t{t.q()} + 1) == t.minus_one();
    j["delta_size"] = delta;
  } else {
    j["rho_index"] = nullptr;
    j["rho_text"] = nullptr;
    j["rho_choices"] = 0;
    j["delta_size"] = nullptr;
  }
  return j;
}

json group_table(const GroupTable& group) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(group.checksum()));
  return {{"q", group.line().q()},
          {"degree", group.degree()},
          {"order", group.order()},
          {"materialized", group.materialized()},
          {"checksum", hex}};
}

json distance(const DistanceResult& r, const GroupTable& group) {
  return {{"distance", r.distance},
          {"agreements", r.agreements},
          {"argmin_index", r.argmin_index},
          {"argmin_triple", triple(group.triple(r.argmin_index))}};
}

json certificate(const CertificateReport& r) {
  return {{"q", r.q},
          {"p", r.p},
          {"f", r.f},
          {"rho_selector", r.rho_selector},
          {"rho_index", r.rho_index},
          {"lemma1", lemma(r.lemma1)},
          {"lemma2", lemma(r.lemma2)},
          {"lemma3", lemma(r.lemma3)},
          {"group_order", r.group_order},
          {"coincidence_histogram", r.coincidence_histogram},
          {"max_coincidence", r.max_coincidence},
          {"delta_side_checked", r.delta_side_checked},
          {"witness_distance", r.witness_distance},
          {"argmin_index", r.argmin_index},
          {"argmin_triple", triple(r.argmin_triple)},
          {"lower_bound", r.lower_bound},
          {"conclusion", r.conclusion},
          {"pass", r.pass}};
}

json search(const SearchReport& r) {
  const auto expected = expected_cr(r.q);
  json j{{"q", r.q},
         {"mode", r.complete ? "exact" : "partial"},
         {"covering_radius", r.covering_radius},
         {"lower_bound_only", !r.complete},
         {"expected_cr", expected},
         {"matches_expected", r.complete && r.covering_radius == expected},
         {"permutations_scanned", r.permutations_scanned},
         {"total_candidates", r.total_candidates},
         {"leaves_evaluated", r.leaves_evaluated},
         {"start_rank", r.start_rank},
         {"next_candidate_rank", r.next_candidate_rank},
         {"wall_time_s", r.wall_time_s},
         {"strategy", strategy_name(r.strategy)}};
  j["witness_of_max"] = r.witness_of_max.size() ? images(r.witness_of_max) : json(nullptr);
  return j;
}

json sample(const SampleReport& r) {
  json hist = json::array();
  for (std::size_t d = 0; d < r.histogram.size(); ++d)
    hist.push_back({{"distance", d}, {"count", r.histogram[d]}});
  return {{"q", r.q},
          {"mode", "sampled"},
          {"trials", r.trials},
          {"seed", r.seed},
          {"histogram", hist},
          {"max_observed", r.max_observed},
          {"expected_cr", r.expected_cr},
          {"violations", r.violations},
          {"farthest", images(r.farthest)}};
}

json checkpoint(const SearchCheckpoint& cp) {
  return {{"q", cp.q},
          {"next_candidate_rank", cp.next_candidate_rank},
          {"current_max", cp.current_max},
          {"witness_so_far", cp.witness_so_far ? images(*cp.witness_so_far) : json(nullptr)},
          {"elapsed", cp.elapsed_s}};
}

SearchCheckpoint checkpoint_from(const json& j) {
  try {
    SearchCheckpoint cp;
    cp.q = j.at("q").get<std::uint32_t>();
    cp.next_candidate_rank = j.at("next_candidate_rank").get<std::uint64_t>();
    cp.current_max = j.at("current_max").get<std::size_t>();
    cp.elapsed_s = j.at("elapsed").get<double>();
    const auto& w = j.at("witness_so_far");
    if (!w.is_null()) cp.witness_so_far.emplace(w.get<std::vector<PointIndex>>());
    return cp;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed checkpoint: ") + e.what());
  }
}

} // namespace pglcr::report
