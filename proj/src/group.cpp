#include "carnot/group.hpp"

#include <cmath>
#include <numeric>

#include "carnot/error.hpp"
#include "carnot/testfn.hpp"

namespace carnot {

Group Group::euclidean(int n) {
    if (n < 1) throw DomainError("euclidean group needs n >= 1");
    Group g;
    g.kind_ = GroupKind::Euclidean;
    g.strata_ = {n};
    g.finish();
    return g;
}

Group Group::heisenberg(int n) {
    if (n < 1) throw DomainError("heisenberg group needs n >= 1");
    Group g;
    g.kind_ = GroupKind::Heisenberg;
    g.order_ = n;
    g.strata_ = {2 * n, 1};
    // coordinates (x_1..x_n, y_1..y_n, t)
    g.coeffs_.assign(2 * n, std::vector<std::vector<double>>(1, std::vector<double>(2 * n, 0.0)));
    for (int i = 0; i < n; ++i) {
        g.coeffs_[i][0][n + i] = -0.5;  // X_i: -y_i/2
        g.coeffs_[n + i][0][i] = 0.5;   // Y_i: +x_i/2
    }
    g.finish();
    return g;
}

Group Group::custom(std::vector<int> strata,
                    std::vector<std::vector<std::vector<double>>> coeffs) {
    if (strata.empty() || strata.size() > 2)
        throw ConfigError("custom groups support one or two strata");
    for (int s : strata)
        if (s < 1) throw ConfigError("strata dimensions must be positive");
    const int N = strata[0];
    const int m = strata.size() == 2 ? strata[1] : 0;
    if (m == 0) {
        for (const auto& c : coeffs)
            if (!c.empty()) throw ConfigError("abelian custom group takes no coefficients");
        coeffs.assign(N, {});
    } else {
        if (static_cast<int>(coeffs.size()) != N)
            throw ConfigError("coeffs must list one entry per first-stratum field");
        for (const auto& ci : coeffs) {
            if (static_cast<int>(ci.size()) != m)
                throw ConfigError("coeffs[i] must list one polynomial per higher coordinate");
            for (const auto& cij : ci)
                if (static_cast<int>(cij.size()) != N)
                    throw ConfigError("each coefficient polynomial is linear in x' (N slopes)");
        }
    }
    Group g;
    g.kind_ = GroupKind::Custom;
    g.strata_ = std::move(strata);
    g.coeffs_ = std::move(coeffs);
    g.finish();
    return g;
}

void Group::finish() {
    n_ = std::accumulate(strata_.begin(), strata_.end(), 0);
    N_ = strata_[0];
    Q_ = 0;
    weights_.clear();
    for (std::size_t i = 0; i < strata_.size(); ++i) {
        Q_ += static_cast<int>(i + 1) * strata_[i];
        weights_.insert(weights_.end(), strata_[i], static_cast<int>(i + 1));
    }
    if (coeffs_.empty()) coeffs_.assign(N_, {});
}

double Group::field_coeff(int i, int j, std::span<const double> x) const {
    const auto& a = coeffs_[i][j];
    double s = 0.0;
    for (int k = 0; k < N_; ++k) s += a[k] * x[k];
    return s;
}

void Group::horizontal_gradient(std::span<const double> x, std::span<const double> grad,
                                std::span<double> out) const {
    const int m = n_ - N_;
    for (int i = 0; i < N_; ++i) {
        double s = grad[i];
        for (int j = 0; j < m; ++j) {
            const double gj = grad[N_ + j];
            if (gj != 0.0) s += field_coeff(i, j, x) * gj;
        }
        out[i] = s;
    }
}

std::string Group::name() const {
    switch (kind_) {
        case GroupKind::Euclidean:
            return "euclidean:" + std::to_string(n_);
        case GroupKind::Heisenberg:
            return "heisenberg:" + std::to_string(order_);
        case GroupKind::Custom: {
            std::string s = "custom:";
            for (std::size_t i = 0; i < strata_.size(); ++i)
                s += (i ? "," : "") + std::to_string(strata_[i]);
            return s;
        }
    }
    return {};
}

HalfSpace HalfSpace::make(std::vector<double> v, double d) {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("half-space normal must be nonzero");
    for (double& c : v) c /= norm;
    return HalfSpace{std::move(v), d};
}

std::vector<double> dilate(const Group& g, double r, std::span<const double> x) {
    if (!(r > 0.0)) throw DomainError("dilation factor must be positive");
    std::vector<double> y(x.begin(), x.end());
    const auto& w = g.weights();
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= std::pow(r, w[k]);
    return y;
}

double dist_boundary(const HalfSpace& h, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += h.v[k] * x[k];
    return s - h.d;
}

std::vector<double> horizontal_gradient(const Group& g, const TestFunction& f,
                                        std::span<const double> x) {
    std::vector<double> grad(g.dim()), out(g.horizontal_dim());
    f.value_and_grad(x, grad);
    g.horizontal_gradient(x, grad, out);
    return out;
}

}  // namespace carnot
