#pragma once

#include <cstdint>

#include "json.hpp"
#include "pglcr/cover.hpp"
#include "pglcr/gf.hpp"
#include "pglcr/metric.hpp"
#include "pglcr/projline.hpp"
#include "pglcr/witness.hpp"

// JSON forms of the library's reports. Layouts match schemas/*.schema.json.
namespace pglcr::report {

using nlohmann::json;

json tower_summary(const gf::FieldTower& t, std::uint32_t rho_selector = 0);
json group_table(const GroupTable& group);
json distance(const DistanceResult& r, const GroupTable& group);
json certificate(const CertificateReport& r);
json search(const SearchReport& r);
json sample(const SampleReport& r);

json checkpoint(const SearchCheckpoint& cp);
SearchCheckpoint checkpoint_from(const json& j);

const char* strategy_name(SearchStrategy s);

} // namespace pglcr::report
