#include "toa/potential.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "toa/errors.hpp"

namespace toa {

PotentialSeries::PotentialSeries(std::vector<double> coeffs, double mass, double hbar,
                                 int max_degree)
    : coeffs_(std::move(coeffs)), mass_(mass), hbar_(hbar) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    if (static_cast<int>(coeffs_.size()) > max_degree) {
        throw InvalidArgument("potential degree " + std::to_string(coeffs_.size()) +
                              " exceeds the configured cap " + std::to_string(max_degree));
    }
    if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw InvalidArgument("mass must be positive");
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw InvalidArgument("hbar must be positive");
    for (double a : coeffs_) {
        if (!std::isfinite(a)) throw InvalidArgument("potential coefficients must be finite");
    }
}

PotentialSeries PotentialSeries::free_particle(double mass, double hbar) {
    return PotentialSeries({0.0}, mass, hbar);
}

PotentialSeries PotentialSeries::monomial(int degree, double strength, double mass, double hbar) {
    if (degree < 1) throw InvalidArgument("monomial degree must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(degree), 0.0);
    c.back() = strength;
    return PotentialSeries(std::move(c), mass, hbar);
}

double PotentialSeries::operator()(double q) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + *it;
    return acc * q;
}

double PotentialSeries::derivative(int n, double q) const {
    if (n < 0) throw InvalidArgument("derivative order must be non-negative");
    if (n == 0) return (*this)(q);
    const int S = degree();
    if (n > S) return 0.0;
    // V^{(n)}(q) = sum_{k>=0} a_{k+n} (k+1)...(k+n) q^k
    double acc = 0.0;
    for (int k = S - n; k >= 0; --k) {
        double falling = 1.0;
        for (int i = 1; i <= n; ++i) falling *= static_cast<double>(k + i);
        acc = acc * q + coefficient(k + n) * falling;
    }
    return acc;
}

PotentialSeries PotentialSeries::shifted(double x) const {
    // Taylor shift of c_0 + c_1 q + ... with c_0 = 0.
    const int S = degree();
    std::vector<double> c(static_cast<std::size_t>(S) + 1, 0.0);
    for (int s = 1; s <= S; ++s) c[static_cast<std::size_t>(s)] = coefficient(s);
    for (int i = 0; i < S; ++i) {
        for (int j = S - 1; j >= i; --j) c[static_cast<std::size_t>(j)] += x * c[static_cast<std::size_t>(j) + 1];
    }
    PotentialSeries out(std::vector<double>(c.begin() + 1, c.end()), mass_, hbar_);
    out.dropped_constant_ = c[0];
    return out;
}

bool PotentialSeries::is_linear() const { return effective_degree() <= 2; }

double PotentialSeries::coefficient(int s) const {
    if (s < 1 || s > degree()) return 0.0;
    return coeffs_[static_cast<std::size_t>(s) - 1];
}

int PotentialSeries::effective_degree() const {
    for (int s = degree(); s >= 1; --s) {
        if (coefficient(s) != 0.0) return s;
    }
    return 0;
}

PotentialSeries PotentialSeries::with_constants(double mass, double hbar) const {
    PotentialSeries out(coeffs_, mass, hbar);
    out.dropped_constant_ = dropped_constant_;
    return out;
}

std::uint64_t PotentialSeries::fingerprint() const {
    // FNV-1a over the bit patterns; trailing zeros do not change the potential.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double d) {
        auto bits = std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    for (int s = 1; s <= effective_degree(); ++s) mix(coefficient(s));
    mix(mass_);
    mix(hbar_);
    return h;
}

std::string PotentialSeries::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "V(q) =";
    bool any = false;
    for (int s = 1; s <= degree(); ++s) {
        double a = coefficient(s);
        if (a == 0.0) continue;
        os << (any ? " + " : " ") << a << "*q^" << s;
        any = true;
    }
    if (!any) os << " 0";
    os << " (mass " << mass_ << ", hbar " << hbar_ << ")";
    return os.str();
}

PotentialSeries potential_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InvalidArgument("potential document must be a JSON object");
    std::vector<double> coeffs;
    if (doc.contains("coeffs")) {
        const auto& c = doc.at("coeffs");
        if (!c.is_array()) throw InvalidArgument("\"coeffs\" must be an array of numbers");
        for (const auto& x : c) {
            if (!x.is_number()) throw InvalidArgument("\"coeffs\" must be an array of numbers");
            coeffs.push_back(x.get<double>());
        }
    }
    auto number = [&doc](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        const auto& x = doc.at(key);
        if (!x.is_number()) throw InvalidArgument(std::string("\"") + key + "\" must be a number");
        return x.get<double>();
    };
    return PotentialSeries(std::move(coeffs), number("mass", 1.0), number("hbar", 1.0));
}

nlohmann::json potential_to_json(const PotentialSeries& V) {
    nlohmann::json doc;
    doc["coeffs"] = std::vector<double>(V.coefficients().begin(), V.coefficients().end());
    doc["mass"] = V.mass();
    doc["hbar"] = V.hbar();
    return doc;
}

} // namespace toa
