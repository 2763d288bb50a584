#pragma once

// Electro-optic coupling rate from an azimuthal microwave field profile, and
// the microwave quality-factor budget.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace eotrans {

class InvalidProfile : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FieldSample {
    double phi = 0.0;   // rad, in [0, 2 pi)
    double field = 0.0; // V/m
};

/// Tabulated correction field E_RF(phi) along the resonator rim, normalized
/// to a total stored microwave energy.
class FieldProfile {
public:
    FieldProfile(std::vector<FieldSample> samples, double stored_energy)
        : samples_(std::move(samples)), stored_energy_(stored_energy)
    {
        if (samples_.size() < 4) throw InvalidProfile("field profile needs at least 4 samples");
        if (!(stored_energy_ > 0.0) || !std::isfinite(stored_energy_))
            throw InvalidProfile("stored energy must be positive");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (!(s.phi >= 0.0 && s.phi < two_pi)) throw InvalidProfile("phi must lie in [0, 2pi)");
            if (!std::isfinite(s.field)) throw InvalidProfile("field samples must be finite");
            if (i > 0 && !(s.phi > samples_[i - 1].phi)) throw InvalidProfile("phi must be strictly increasing");
        }
    }

    const std::vector<FieldSample>& samples() const { return samples_; }
    double stored_energy() const { return stored_energy_; }

    FieldProfile scaled(double factor) const
    {
        auto out = samples_;
        for (auto& s : out) s.field *= factor;
        return {std::move(out), stored_energy_};
    }

    FieldProfile with_stored_energy(double energy) const { return {samples_, energy}; }

    /// Closed-loop integral of the field over phi by the periodic trapezoidal
    /// rule, including the wrap-around segment from the last sample to 2 pi +
    /// the first one.
    double loop_integral() const
    {
        double sum = 0.0;
        const std::size_t n = samples_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = samples_[i];
            const auto& b = samples_[(i + 1) % n];
            const double dphi = (i + 1 < n) ? b.phi - a.phi : b.phi + two_pi - a.phi;
            sum += 0.5 * dphi * (a.field + b.field);
        }
        return sum;
    }

private:
    std::vector<FieldSample> samples_;
    double stored_energy_;
};

/// Uniformly sampled profile from a callable of phi (rad).
template <class F>
FieldProfile sample_profile(F&& field, std::size_t count, double stored_energy = 1.0)
{
    std::vector<FieldSample> samples(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double phi = two_pi * static_cast<double>(i) / static_cast<double>(count);
        samples[i] = {phi, field(phi)};
    }
    return {std::move(samples), stored_energy};
}

/// Reads `phi_degrees,field_V_per_m` lines after one header line.
inline FieldProfile read_field_profile(std::istream& in, double stored_energy = 1.0)
{
    std::string line;
    if (!std::getline(in, line)) throw InvalidProfile("field profile: missing header line");
    std::vector<FieldSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidProfile("field profile line " + std::to_string(line_no) + ": expected 'phi,field'");
        try {
            std::size_t used = 0;
            const std::string phi_text = line.substr(0, comma);
            const std::string field_text = line.substr(comma + 1);
            const double phi_deg = std::stod(phi_text, &used);
            if (phi_text.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("phi");
            const double field = std::stod(field_text, &used);
            if (field_text.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("field");
            samples.push_back({phi_deg * std::numbers::pi / 180.0, field});
        } catch (const std::logic_error&) {
            throw InvalidProfile("field profile line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return {std::move(samples), stored_energy};
}

inline FieldProfile read_field_profile_file(const std::string& path, double stored_energy = 1.0)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field profile: " + path);
    return read_field_profile(in, stored_energy);
}

struct CrystalOptics {
    double refractive_index = 2.21;      // extraordinary index near 1550 nm (lithium niobate)
    double electrooptic_coeff = 30.8e-12; // r33, m/V

    void validate() const
    {
        if (!(refractive_index > 1.0)) throw InvalidParameter("refractive index must exceed 1");
        if (!(electrooptic_coeff > 0.0)) throw InvalidParameter("electro-optic coefficient must be positive");
    }
};

struct CouplingRate {
    double signed_value = 0.0; // rad/s, sign follows the loop integral
    double magnitude() const { return std::abs(signed_value); }
};

/// Single-photon coupling g_eo = n^2 r33 sqrt(w_p w_a) sqrt(hbar w_b / W)
/// * loop_integral / (16 pi).
inline CouplingRate g_eo_from_profile(const FieldProfile& profile, const CrystalOptics& optics, double omega_p,
                                      double omega_a, double omega_b)
{
    optics.validate();
    if (!(omega_p > 0.0) || !(omega_a > 0.0) || !(omega_b > 0.0))
        throw InvalidParameter("g_eo_from_profile: frequencies must be positive");
    const double n2 = optics.refractive_index * optics.refractive_index;
    const double prefactor = n2 * optics.electrooptic_coeff / (16.0 * std::numbers::pi) *
                             std::sqrt(omega_p * omega_a) *
                             std::sqrt(PhysicalConstants::reduced_planck * omega_b / profile.stored_energy());
    return {prefactor * profile.loop_integral()};
}

inline constexpr double infinite_q = std::numeric_limits<double>::infinity();

/// Q_d = 1 / (p tan(delta)). A zero loss tangent yields infinite_q.
inline double dielectric_q(double participation, double loss_tangent)
{
    if (!(participation > 0.0 && participation <= 1.0))
        throw InvalidParameter("participation ratio must lie in (0, 1]");
    if (!(loss_tangent >= 0.0)) throw InvalidParameter("loss tangent must be non-negative");
    if (loss_tangent == 0.0) return infinite_q;
    return 1.0 / (participation * loss_tangent);
}

/// Loss channels of the microwave resonator. Absent couplers are infinite_q.
struct QBudget {
    double participation = 1.0;
    double loss_tangent = 0.0;
    double intrinsic_q = infinite_q;
    double input_coupler_q = infinite_q;
    double output_coupler_q = infinite_q;
    // Counts the dielectric channel twice, as in the printed combiner. Off by
    // default; exposed for comparison only.
    bool count_dielectric_twice = false;

    void validate() const
    {
        if (!(participation > 0.0 && participation <= 1.0))
            throw InvalidParameter("participation ratio must lie in (0, 1]");
        if (!(loss_tangent >= 0.0)) throw InvalidParameter("loss tangent must be non-negative");
        if (!(intrinsic_q > 0.0) || !(input_coupler_q > 0.0) || !(output_coupler_q > 0.0))
            throw InvalidParameter("quality factors must be positive");
    }
};

/// 1/Q_L = 1/Q_d + 1/Q_1 + 1/Q_2 + 1/Q_0.
inline double loaded_q(const QBudget& budget)
{
    budget.validate();
    const double qd = dielectric_q(budget.participation, budget.loss_tangent);
    double inverse = 1.0 / qd + 1.0 / budget.input_coupler_q + 1.0 / budget.output_coupler_q + 1.0 / budget.intrinsic_q;
    if (budget.count_dielectric_twice) inverse += 1.0 / qd;
    return inverse > 0.0 ? 1.0 / inverse : infinite_q;
}

} // namespace eotrans
