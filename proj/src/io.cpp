#include "deco/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace deco::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json measure_to_json(const spectral_measure& m) {
    json j;
    switch (m.kind()) {
    case spectral_measure::kind_t::discrete: {
        j["kind"] = "discrete";
        json modes = json::array();
        for (const auto& md : m.modes())
            modes.push_back({{"frequency", md.frequency}, {"weight", md.weight}});
        j["modes"] = std::move(modes);
        break;
    }
    case spectral_measure::kind_t::powerlaw:
        j["kind"] = "powerlaw";
        j["amplitude"] = m.amplitude();
        j["exponent"] = m.exponent();
        j["cutoff"] = m.cutoff();
        break;
    case spectral_measure::kind_t::tabulated:
        j["kind"] = "tabulated";
        j["grid"] = m.grid();
        j["density"] = m.density_samples();
        break;
    }
    return j;
}

spectral_measure measure_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
        std::vector<bath_mode> modes;
        for (const auto& md : j.at("modes"))
            modes.push_back({md.at("frequency").get<double>(), md.at("weight").get<double>()});
        return spectral_measure::discrete(std::move(modes));
    }
    if (kind == "powerlaw") {
        return spectral_measure::power_law(j.at("amplitude").get<double>(),
                                           j.at("exponent").get<double>(),
                                           j.at("cutoff").get<double>());
    }
    if (kind == "tabulated") {
        return spectral_measure::tabulated(j.at("grid").get<std::vector<double>>(),
                                           j.at("density").get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown measure kind: " + kind);
}

json reference_to_json(const reference_state& r) {
    json j;
    if (r.is_vacuum()) {
        j["type"] = "vacuum";
    } else if (!r.is_mixture()) {
        j["type"] = "coherent";
        j["zeta"] = {{"re", r.components()[0].zeta.real()},
                     {"im", r.components()[0].zeta.imag()}};
    } else {
        j["type"] = "mixture";
        json comps = json::array();
        for (const auto& c : r.components())
            comps.push_back({{"probability", c.probability},
                             {"zeta", {{"re", c.zeta.real()}, {"im", c.zeta.imag()}}}});
        j["components"] = std::move(comps);
    }
    return j;
}

reference_state reference_from_json(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "vacuum") return reference_state::vacuum();
    auto zeta_of = [](const json& z) {
        return cplx(z.at("re").get<double>(), z.at("im").get<double>());
    };
    if (type == "coherent") return reference_state::coherent(zeta_of(j.at("zeta")));
    if (type == "mixture") {
        std::vector<reference_state::component> comps;
        for (const auto& c : j.at("components"))
            comps.push_back({c.at("probability").get<double>(), zeta_of(c.at("zeta"))});
        return reference_state::mixture(std::move(comps));
    }
    throw std::invalid_argument("unknown reference type: " + type);
}

json environment_to_json(const fourier_environment& e) {
    json j;
    j["id"] = e.describe();
    return j;
}

fourier_environment environment_from_json(const json& j) {
    if (j.contains("preset")) {
        std::string p = j.at("preset").get<std::string>();
        if (p == "gaussian")
            return fourier_environment::gaussian(j.at("mean").get<double>(),
                                                 j.at("sigma").get<double>());
        if (p == "smooth_bump")
            return fourier_environment::smooth_bump(j.at("center").get<double>(),
                                                    j.at("width").get<double>());
        throw std::invalid_argument("unknown environment preset: " + p);
    }
    return fourier_environment::piecewise_linear(j.at("grid").get<std::vector<double>>(),
                                                 j.at("density").get<std::vector<double>>());
}

json moment_to_json(const extended_value& v) {
    if (v.divergent) return json{{"divergent", true}};
    return json{{"value", v.value}};
}

void write_curve_csv(std::ostream& os, const decoherence_curve& c,
                     const std::string& time_column) {
    os << time_column << ",psi,phi,re_chi,im_chi,abs_chi\n";
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        os << format_double(c.times[i]) << ',' << format_double(c.psi[i]) << ','
           << format_double(c.phi[i]) << ',' << format_double(c.chi[i].real()) << ','
           << format_double(c.chi[i].imag()) << ',' << format_double(std::abs(c.chi[i]))
           << '\n';
    }
}

json curve_to_json(const decoherence_curve& c) {
    json j;
    j["params"] = {{"alpha", c.params.alpha},
                   {"beta", c.params.beta},
                   {"measure", c.params.measure_id},
                   {"reference", c.params.reference_id}};
    j["times"] = c.times;
    j["psi"] = c.psi;
    j["phi"] = c.phi;
    json re = json::array(), im = json::array();
    for (const auto& z : c.chi) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    j["re_chi"] = std::move(re);
    j["im_chi"] = std::move(im);
    return j;
}

void write_bound_csv(std::ostream& os, const sector_bound_report& r) {
    os << "t,measured,bound_e3,envelope\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        os << format_double(r.times[i]) << ',' << format_double(r.measured[i]) << ','
           << format_double(r.bound_e3[i]) << ',' << format_double(r.envelope[i]) << '\n';
    }
}

json bound_to_json(const sector_bound_report& r) {
    json j;
    j["kernel"] = r.kernel_id;
    j["fit_const"] = r.fit_const;
    j["fit_gamma"] = r.fit_gamma;
    j["max_margin"] = r.max_margin;
    j["times"] = r.times;
    j["measured"] = r.measured;
    j["bound_e3"] = r.bound_e3;
    j["envelope"] = r.envelope;
    return j;
}

} // namespace deco::io
