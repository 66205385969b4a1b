#ifndef KSPH_CATALOG_HPP
#define KSPH_CATALOG_HPP

#include "ksph/kstab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ksph {

enum class ExpectedStatus { stable, not_semistable, not_ke_but_soliton, unstable };

std::string expected_status_name(ExpectedStatus s);

struct CatalogEntry {
    std::string name;
    SphericalDatum datum;
    ExpectedStatus expected_status = ExpectedStatus::stable;
    std::optional<QVec> expected_barycenter;
    std::string source_note;
};

/// Names of the built-in instances, deterministic order.
std::vector<std::string> list_entries();

CatalogEntry get_entry(const std::string& name);

} // namespace ksph

#endif
