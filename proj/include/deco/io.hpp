#ifndef DECO_IO_HPP
#define DECO_IO_HPP

#include "deco/bounds.hpp"
#include "deco/decoherence.hpp"
#include "deco/envmodels.hpp"
#include "deco/spectral.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace deco::io {

using json = nlohmann::ordered_json;

/// Fixed shortest-roundtrip formatting; CSV output is byte-stable across
/// runs for identical inputs.
std::string format_double(double v);

json measure_to_json(const spectral_measure& m);
spectral_measure measure_from_json(const json& j);

json reference_to_json(const reference_state& r);
reference_state reference_from_json(const json& j);

json environment_to_json(const fourier_environment& e);
fourier_environment environment_from_json(const json& j);

json moment_to_json(const extended_value& v);

/// Header: t,psi,phi,re_chi,im_chi,abs_chi (column `s` for Fourier curves).
void write_curve_csv(std::ostream& os, const decoherence_curve& c,
                     const std::string& time_column = "t");
json curve_to_json(const decoherence_curve& c);

/// Header: t,measured,bound_e3,envelope.
void write_bound_csv(std::ostream& os, const sector_bound_report& r);
json bound_to_json(const sector_bound_report& r);

} // namespace deco::io

#endif
