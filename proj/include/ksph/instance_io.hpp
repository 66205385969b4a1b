#ifndef KSPH_INSTANCE_IO_HPP
#define KSPH_INSTANCE_IO_HPP

#include "ksph/kstab.hpp"
#include "ksph/quantized.hpp"

#include <json.hpp>

#include <string>

namespace ksph {

struct InstanceOptions {
    double tol = 1e-9;
    unsigned level = 20;
};

struct InstanceDocument {
    SphericalDatum datum;
    InstanceOptions options;
};

/// Parses the JSON instance format (see docs/instance-format.md). Rationals
/// are strings like "-3/2"; reals are decimal strings. Errors carry the
/// JSON path of the offending field.
InstanceDocument parse_instance(const std::string& text);

/// Canonical JSON instance document for the datum (parse round-trips).
std::string export_instance(const SphericalDatum& datum);

// ----- reports (canonical JSON: sorted keys, string-encoded numbers) -----

nlohmann::json verdict_report(const SphericalDatum& datum, const Verdict& verdict);
nlohmann::json barycenter_report(const SphericalDatum& datum, double tol);
nlohmann::json quantized_report(const SphericalDatum& datum, unsigned level, double tol);
nlohmann::json soliton_report(const SphericalDatum& datum, const SolitonResult& sol,
                              const Verdict& verdict_at_zeta);

std::string render_json(const nlohmann::json& report);
std::string render_text(const nlohmann::json& report);

/// Fixed-precision decimal encoding used for all reals in reports.
std::string dec_string(double v);

} // namespace ksph

#endif
