#pragma once

#include <span>
#include <string>
#include <vector>

namespace carnot {

enum class GroupKind { Euclidean, Heisenberg, Custom };

// A stratified group in exponential coordinates. Only step <= 2 is supported:
// X_i = d/dx'_i + sum_j p_j^i(x') d/dx''_j with p_j^i linear in x'.
class Group {
public:
    static Group euclidean(int n);
    static Group heisenberg(int n);
    // coeffs[i][j][k]: p_j^i(x') = sum_k coeffs[i][j][k] * x'_k
    static Group custom(std::vector<int> strata,
                        std::vector<std::vector<std::vector<double>>> coeffs);

    GroupKind kind() const { return kind_; }
    const std::vector<int>& strata() const { return strata_; }
    int dim() const { return n_; }
    int homogeneous_dim() const { return Q_; }
    int horizontal_dim() const { return N_; }
    // Heisenberg order, 0 for other kinds.
    int order() const { return order_; }
    // Dilation weight of each coordinate.
    const std::vector<int>& weights() const { return weights_; }
    const std::vector<std::vector<std::vector<double>>>& coeffs() const { return coeffs_; }

    // p_j^i evaluated at the first-stratum part of x.
    double field_coeff(int i, int j, std::span<const double> x) const;

    // Horizontal gradient from a full Euclidean gradient.
    void horizontal_gradient(std::span<const double> x, std::span<const double> grad,
                             std::span<double> out) const;

    // True when |grad_H f|^2 is invariant under rotations of x' for f depending on
    // (|x'|, x'') only.
    bool rotation_invariant() const { return kind_ != GroupKind::Custom; }

    std::string name() const;

private:
    Group() = default;
    void finish();

    GroupKind kind_ = GroupKind::Euclidean;
    std::vector<int> strata_;
    int n_ = 0;
    int Q_ = 0;
    int N_ = 0;
    int order_ = 0;
    std::vector<int> weights_;
    std::vector<std::vector<std::vector<double>>> coeffs_;
};

struct HalfSpace {
    std::vector<double> v;  // unit normal
    double d = 0.0;

    // Normalizes v; a zero vector is a domain error.
    static HalfSpace make(std::vector<double> v, double d);
};

std::vector<double> dilate(const Group& g, double r, std::span<const double> x);

double dist_boundary(const HalfSpace& h, std::span<const double> x);

class TestFunction;

std::vector<double> horizontal_gradient(const Group& g, const TestFunction& f,
                                        std::span<const double> x);

}  // namespace carnot
