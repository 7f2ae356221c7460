#include "polyapprox/test_functions.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polyapprox/errors.hpp"

namespace polyapprox {

using std::numbers::pi;

double eval_f1(std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] / (2.0 * static_cast<double>(i + 1));
    return std::exp(s);
}

double eval_f2(std::span<const double> y) {
    const std::size_t d = y.size();
    if (d == 0) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double q = d == 1 ? 1.0 : std::pow(10.0, -3.0 * static_cast<double>(i) / static_cast<double>(d - 1));
        s += q * y[i];
    }
    return 1.0 / (1.0 + s / (2.0 * static_cast<double>(d)));
}

double f3_delta(DeltaRule rule, std::size_t i) {
    const auto x = static_cast<double>(i);
    return rule == DeltaRule::Linear ? x : x * x;
}

double f3_factor(double y, double delta) { return std::sqrt(2.0 * delta + delta * delta) / (y + 1.0 + delta); }

double eval_f3(std::span<const double> y, DeltaRule rule) {
    double p = 1.0;
    for (std::size_t i = 0; i < y.size(); ++i) p *= f3_factor(y[i], f3_delta(rule, i + 1));
    return p;
}

namespace {

struct Range {
    double lo, hi;
};

// Parameter boxes, in the library's input order.
constexpr std::array<Range, 8> kBorehole{{{0.05, 0.15},
                                          {100.0, 50000.0},
                                          {63070.0, 115600.0},
                                          {990.0, 1110.0},
                                          {63.1, 116.0},
                                          {700.0, 820.0},
                                          {1120.0, 1680.0},
                                          {9855.0, 12045.0}}};
constexpr std::array<Range, 6> kCircuit{{{50.0, 150.0}, {25.0, 70.0}, {0.5, 3.0}, {1.2, 2.5}, {0.25, 1.2}, {50.0, 300.0}}};
constexpr std::array<Range, 7> kPiston{{{30.0, 60.0},
                                        {0.005, 0.020},
                                        {0.002, 0.010},
                                        {1000.0, 5000.0},
                                        {90000.0, 110000.0},
                                        {290.0, 296.0},
                                        {340.0, 360.0}}};
constexpr std::array<Range, 8> kRobot{
    {{0.0, 2 * pi}, {0.0, 2 * pi}, {0.0, 2 * pi}, {0.0, 2 * pi}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}};
constexpr std::array<Range, 10> kWing{{{150.0, 200.0},
                                       {220.0, 300.0},
                                       {6.0, 10.0},
                                       {-10.0, 10.0},
                                       {16.0, 45.0},
                                       {0.5, 1.0},
                                       {0.08, 0.18},
                                       {2.5, 6.0},
                                       {1700.0, 2500.0},
                                       {0.025, 0.08}}};

std::span<const Range> ranges(VirtualLib name) {
    switch (name) {
        case VirtualLib::Borehole: return kBorehole;
        case VirtualLib::Circuit: return kCircuit;
        case VirtualLib::Piston: return kPiston;
        case VirtualLib::Robot: return kRobot;
        case VirtualLib::Wing: return kWing;
    }
    return {};
}

/// Water flow rate through a borehole [m^3/yr]:
/// 2 pi Tu (Hu - Hl) / (ln(r/rw) (1 + 2 L Tu / (ln(r/rw) rw^2 Kw) + Tu/Tl)).
double borehole(std::span<const double> t) {
    const double rw = t[0], r = t[1], tu = t[2], hu = t[3], tl = t[4], hl = t[5], l = t[6], kw = t[7];
    const double lr = std::log(r / rw);
    return 2.0 * pi * tu * (hu - hl) / (lr * (1.0 + 2.0 * l * tu / (lr * rw * rw * kw) + tu / tl));
}

/// Midpoint voltage of an output transformerless push-pull circuit:
/// Vb1 = 12 Rb2/(Rb1+Rb2),
/// Vm = (Vb1+0.74) b (Rc2+9) / (b (Rc2+9) + Rf) + 11.35 Rf / (b (Rc2+9) + Rf)
///      + 0.74 Rf b (Rc2+9) / ((b (Rc2+9) + Rf) Rc1).
double circuit(std::span<const double> t) {
    const double rb1 = t[0], rb2 = t[1], rf = t[2], rc1 = t[3], rc2 = t[4], b = t[5];
    const double vb1 = 12.0 * rb2 / (rb1 + rb2);
    const double g = b * (rc2 + 9.0);
    const double den = g + rf;
    return (vb1 + 0.74) * g / den + 11.35 * rf / den + 0.74 * rf * g / (den * rc1);
}

/// Piston cycle time [s]:
/// A = P0 S + 19.62 M - k V0 / S, V = S/(2k) (sqrt(A^2 + 4 k P0 V0 Ta/T0) - A),
/// C = 2 pi sqrt(M / (k + S^2 P0 V0 Ta / (T0 V^2))).
double piston(std::span<const double> t) {
    const double m = t[0], s = t[1], v0 = t[2], k = t[3], p0 = t[4], ta = t[5], t0 = t[6];
    const double a = p0 * s + 19.62 * m - k * v0 / s;
    const double v = s / (2.0 * k) * (std::sqrt(a * a + 4.0 * k * p0 * v0 * ta / t0) - a);
    return 2.0 * pi * std::sqrt(m / (k + s * s * p0 * v0 * ta / (t0 * v * v)));
}

/// Distance of a 4-segment robot arm's end from the origin:
/// u = sum_i L_i cos(sum_{j<=i} theta_j), v = sum_i L_i sin(...), f = sqrt(u^2 + v^2).
double robot(std::span<const double> t) {
    double u = 0.0, v = 0.0, angle = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        angle += t[i];
        u += t[4 + i] * std::cos(angle);
        v += t[4 + i] * std::sin(angle);
    }
    return std::sqrt(u * u + v * v);
}

/// Light aircraft wing weight:
/// 0.036 Sw^0.758 Wfw^0.0035 (A / cos^2 L)^0.6 q^0.006 l^0.04 (100 tc / cos L)^-0.3 (Nz Wdg)^0.49 + Sw Wp,
/// sweep angle L in degrees.
double wing(std::span<const double> t) {
    const double sw = t[0], wfw = t[1], a = t[2], q = t[4], lam = t[5], tc = t[6], nz = t[7], wdg = t[8], wp = t[9];
    const double c = std::cos(t[3] * pi / 180.0);
    return 0.036 * std::pow(sw, 0.758) * std::pow(wfw, 0.0035) * std::pow(a / (c * c), 0.6) * std::pow(q, 0.006) *
               std::pow(lam, 0.04) * std::pow(100.0 * tc / c, -0.3) * std::pow(nz * wdg, 0.49) +
           sw * wp;
}

}  // namespace

std::string_view to_string(VirtualLib name) noexcept {
    switch (name) {
        case VirtualLib::Borehole: return "borehole";
        case VirtualLib::Circuit: return "circuit";
        case VirtualLib::Piston: return "piston";
        case VirtualLib::Robot: return "robot";
        case VirtualLib::Wing: return "wing";
    }
    return "unknown";
}

VirtualLib parse_virtual_lib(std::string_view name) {
    if (name == "borehole" || name == "f4") return VirtualLib::Borehole;
    if (name == "circuit") return VirtualLib::Circuit;
    if (name == "piston") return VirtualLib::Piston;
    if (name == "robot") return VirtualLib::Robot;
    if (name == "wing") return VirtualLib::Wing;
    throw ConfigError("unknown library function '" + std::string(name) + "'");
}

std::size_t native_dim(VirtualLib name) noexcept { return ranges(name).size(); }

double eval_virtual_lib(VirtualLib name, std::span<const double> y) {
    const auto box = ranges(name);
    if (y.size() > box.size())
        throw ConfigError(std::string(to_string(name)) + " accepts at most " + std::to_string(box.size()) + " inputs");
    std::array<double, 10> theta{};
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double yi = i < y.size() ? y[i] : 1.0;
        theta[i] = 0.5 * (box[i].lo + box[i].hi) + 0.5 * (box[i].hi - box[i].lo) * yi;
    }
    const std::span<const double> t(theta.data(), box.size());
    switch (name) {
        case VirtualLib::Borehole: return borehole(t);
        case VirtualLib::Circuit: return circuit(t);
        case VirtualLib::Piston: return piston(t);
        case VirtualLib::Robot: return robot(t);
        case VirtualLib::Wing: return wing(t);
    }
    return 0.0;
}

double eval_additive_sine(std::span<const double> y) {
    double s = 0.0;
    for (double yi : y) {
        const double v = std::sin(16.0 / 15.0 * yi - 0.7);
        s += 0.3 + v + v * v;
    }
    return s;
}

double eval_low_dim(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("low-dimensional target needs y_1");
    return 1.0 / (10.0 - 9.0 * y[0]);
}

double eval_linear_sharpness(std::span<const double> y, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < std::min(y.size(), b.size()); ++j) s += b[j] * y[j];
    return s;
}

std::vector<double> sharpness_sequence(double p, std::size_t count) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    std::vector<double> b(count);
    for (std::size_t i = 1; i <= count; ++i) {
        const auto x = static_cast<double>(i + 1);
        const double lx = std::log(x);
        b[i - 1] = std::pow(x * lx * lx, -1.0 / p);
    }
    return b;
}

FemSolver1D::FemSolver1D(std::size_t dofs, Forcing forcing) : dofs_(dofs), h_(1.0 / static_cast<double>(dofs + 1)) {
    if (dofs == 0) throw std::invalid_argument("FEM solver needs at least one degree of freedom");
    midpoints_.resize(dofs + 1);
    for (std::size_t e = 0; e <= dofs; ++e) midpoints_[e] = (static_cast<double>(e) + 0.5) * h_;
    // Load vector by nodal quadrature: int F phi_j ~ h F(x_j), exact for constant F.
    load_.resize(dofs);
    for (std::size_t j = 0; j < dofs; ++j) {
        const double x = static_cast<double>(j + 1) * h_;
        load_[j] = h_ * (forcing ? forcing(x) : 1.0);
    }
}

FemSolution FemSolver1D::solve(std::span<const double> a) const {
    if (a.size() != dofs_ + 1) throw std::invalid_argument("one coefficient value per element required");
    for (double v : a)
        if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("diffusion coefficient must be positive and finite");
    const std::size_t n = dofs_;
    const double inv_h = 1.0 / h_;
    // K_jj = (a_{j} + a_{j+1}) / h, K_{j,j+1} = -a_{j+1} / h (elements indexed 0..n).
    std::vector<double> diag(n), upper(n > 0 ? n - 1 : 0), c(n), rhs(load_);
    for (std::size_t j = 0; j < n; ++j) diag[j] = (a[j] + a[j + 1]) * inv_h;
    for (std::size_t j = 0; j + 1 < n; ++j) upper[j] = -a[j + 1] * inv_h;

    // Thomas algorithm; the matrix is symmetric and diagonally dominant.
    std::vector<double> d(diag);
    for (std::size_t j = 1; j < n; ++j) {
        const double w = upper[j - 1] / d[j - 1];
        d[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
        if (!(d[j] > 0.0)) throw NumericalError("stiffness matrix is not positive definite");
    }
    FemSolution s;
    s.u.resize(n);
    s.u[n - 1] = rhs[n - 1] / d[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) s.u[j] = (rhs[j] - upper[j] * s.u[j + 1]) / d[j];

    s.nodes.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.nodes[j] = static_cast<double>(j + 1) * h_;
    double energy = 0.0, work = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double ku = diag[j] * s.u[j];
        if (j > 0) ku += upper[j - 1] * s.u[j - 1];
        if (j + 1 < n) ku += upper[j] * s.u[j + 1];
        energy += s.u[j] * ku;
        work += s.u[j] * load_[j];
    }
    s.energy = energy;
    s.load_work = work;
    return s;
}

double FemSolver1D::value_at(const FemSolution& s, double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double t = x / h_;
    const auto k = static_cast<std::size_t>(std::floor(t));  // left node index, 0 = boundary
    const double frac = t - static_cast<double>(k);
    const double left = k == 0 ? 0.0 : s.u[k - 1];
    const double right = k + 1 > dofs_ ? 0.0 : s.u[k];
    return (1.0 - frac) * left + frac * right;
}

ParametricDiffusion::ParametricDiffusion(std::size_t d, std::size_t dofs, FemSolver1D::Forcing forcing)
    : d_(d), solver_(dofs, std::move(forcing)) {
    if (d == 0) throw std::invalid_argument("parametric diffusion needs d >= 1");
    constexpr double beta_c = 1.0 / 8.0;
    const double beta_p = std::max(1.0, 2.0 * beta_c);
    const double beta = beta_c / beta_p;
    first_scale_ = std::sqrt(std::sqrt(pi) * beta / 2.0);
    const auto mids = solver_.midpoints();
    modes_.resize(static_cast<Eigen::Index>(d - 1), static_cast<Eigen::Index>(mids.size()));
    for (std::size_t i = 2; i <= d; ++i) {
        const auto k = static_cast<double>(i / 2);
        const double zeta = std::sqrt(std::sqrt(pi) * beta) * std::exp(-(k * pi * beta) * (k * pi * beta) / 8.0);
        for (std::size_t e = 0; e < mids.size(); ++e) {
            const double arg = k * pi * mids[e] / beta_p;
            modes_(static_cast<Eigen::Index>(i - 2), static_cast<Eigen::Index>(e)) =
                zeta * (i % 2 == 0 ? std::sin(arg) : std::cos(arg));
        }
    }
}

FemSolution ParametricDiffusion::solve(std::span<const double> y) const {
    if (y.size() != d_) throw std::invalid_argument("parameter dimension mismatch");
    const std::size_t elems = solver_.midpoints().size();
    std::vector<double> a(elems, 1.0 + y[0] * first_scale_);
    for (std::size_t i = 1; i < d_; ++i) {
        const double yi = y[i];
        for (std::size_t e = 0; e < elems; ++e)
            a[e] += modes_(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(e)) * yi;
    }
    for (double& v : a) v = std::exp(v);
    return solver_.solve(a);
}

double ParametricDiffusion::operator()(std::span<const double> y) const { return solver_.value_at(solve(y), 0.5); }

std::vector<double> TargetFunction::on_grid(const Grid& grid) const {
    if (grid.dim() != dim) throw std::invalid_argument("grid dimension does not match target " + id);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto row = grid.points.row(static_cast<Eigen::Index>(i));
        out[i] = eval(std::span<const double>(row.data(), dim));
    }
    return out;
}

std::vector<std::string> target_ids() {
    return {"f1", "f2", "f3", "f3:i", "f3:isq", "f4", "borehole", "circuit", "piston",
            "robot", "wing", "sine", "lowdim", "linear", "pde"};
}

TargetFunction make_target(std::string_view id, std::size_t d) {
    if (d == 0) throw ConfigError("dimension must be at least 1");
    TargetFunction t{std::string(id), d, {}};
    if (id == "f1") {
        t.eval = [](std::span<const double> y) { return eval_f1(y); };
    } else if (id == "f2") {
        t.eval = [](std::span<const double> y) { return eval_f2(y); };
    } else if (id == "f3" || id == "f3:i") {
        t.eval = [](std::span<const double> y) { return eval_f3(y, DeltaRule::Linear); };
    } else if (id == "f3:isq") {
        t.eval = [](std::span<const double> y) { return eval_f3(y, DeltaRule::Quadratic); };
    } else if (id == "f4" || id == "borehole" || id == "circuit" || id == "piston" || id == "robot" || id == "wing") {
        const VirtualLib name = parse_virtual_lib(id);
        if (d > native_dim(name))
            throw ConfigError(std::string(id) + " has at most " + std::to_string(native_dim(name)) + " inputs");
        t.eval = [name](std::span<const double> y) { return eval_virtual_lib(name, y); };
    } else if (id == "sine") {
        t.eval = [](std::span<const double> y) { return eval_additive_sine(y); };
    } else if (id == "lowdim") {
        t.eval = [](std::span<const double> y) { return eval_low_dim(y); };
    } else if (id == "linear" || id.starts_with("linear:")) {
        double p = 0.5;
        if (id.size() > 7) {
            const std::string_view num = id.substr(7);
            const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
            if (ec != std::errc{} || ptr != num.data() + num.size() || !(p > 0.0))
                throw ConfigError("bad exponent in '" + std::string(id) + "'");
        }
        auto b = std::make_shared<const std::vector<double>>(sharpness_sequence(p, d));
        t.eval = [b](std::span<const double> y) { return eval_linear_sharpness(y, *b); };
    } else if (id == "pde") {
        auto model = std::make_shared<const ParametricDiffusion>(d);
        t.eval = [model](std::span<const double> y) { return (*model)(y); };
    } else {
        throw ConfigError("unknown target function '" + std::string(id) + "'");
    }
    return t;
}

}  // namespace polyapprox
