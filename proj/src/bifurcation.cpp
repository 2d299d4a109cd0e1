#include "ridgewalk/bifurcation.hpp"

#include <cmath>

#include <json.hpp>

#include "ridgewalk/autodiff.hpp"
#include "ridgewalk/spectral.hpp"

namespace ridgewalk {

namespace {

constexpr double kFdH = 1e-4;

struct Derivs {
    double f00, fu, fmu, fuu, fumu, fuuu;
};

double third_raw(const std::function<double(double, double)>& f, double h) {
    return (f(2 * h, 0) - 2 * f(h, 0) + 2 * f(-h, 0) - f(-2 * h, 0)) / (2 * h * h * h);
}

Derivs stencil(const std::function<double(double, double)>& f) {
    const double h = kFdH;
    Derivs d;
    d.f00 = f(0, 0);
    d.fu = (f(h, 0) - f(-h, 0)) / (2 * h);
    d.fmu = (f(0, h) - f(0, -h)) / (2 * h);
    d.fuu = (f(h, 0) - 2 * d.f00 + f(-h, 0)) / (h * h);
    d.fumu = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    // the third derivative is the noisiest; one Richardson pass kills the
    // leading h^2 truncation term
    d.fuuu = (4.0 * third_raw(f, h) - third_raw(f, 2 * h)) / 3.0;
    return d;
}

} // namespace

BifurcationVerdict classify_1d(const ParamField1D& field, double tol) {
    if (!field.f) throw std::invalid_argument("classify_1d: empty field");
    BifurcationVerdict v;
    const Derivs d = stencil(field.f);

    const double delta = field.probe_delta;
    for (int i = 1; i <= 4; ++i) {
        const double u = delta * i / 4.0;
        v.odd_residual = std::max(v.odd_residual, std::abs(field.f(u, 0) + field.f(-u, 0)));
    }

    if (std::abs(d.f00) > tol) {
        v.kind = BifKind::Hyperbolic;
        v.note = "not_stationary";
        return v;
    }
    if (std::abs(d.fu) > tol) {
        v.kind = BifKind::Hyperbolic;
        v.note = "u_linear_term";
        v.a = d.fu;
        return v;
    }

    if (v.odd_residual <= tol) {
        // odd in u: pitchfork candidate u' = a mu u + b u^3
        v.a = d.fumu;
        v.b = d.fuuu / 6.0;
        if (std::abs(v.a) <= 10.0 * tol || std::abs(v.b) <= 10.0 * tol) {
            v.kind = BifKind::Degenerate;
            v.note = "pitchfork_coefficient_near_zero";
            return v;
        }
        v.kind = BifKind::Pitchfork;
        v.criticality = v.b < 0.0 ? Criticality::Super : Criticality::Sub;
        v.side = v.a * v.b < 0.0 ? MuSide::Positive : MuSide::Negative;
        v.note = "pitchfork";
        return v;
    }

    // saddle-node candidate u' = a mu + b u^2
    v.a = d.fmu;
    v.b = d.fuu / 2.0;
    if (std::abs(v.a) <= 10.0 * tol || std::abs(v.b) <= 10.0 * tol) {
        v.kind = BifKind::Degenerate;
        v.note = "saddle_node_coefficient_near_zero";
        return v;
    }
    v.kind = BifKind::SaddleNode;
    v.criticality = Criticality::NA;
    v.side = v.a * v.b < 0.0 ? MuSide::Positive : MuSide::Negative;
    v.note = "saddle_node";
    return v;
}

std::vector<EquilibriumBranch> equilibrium_branches(const ParamField1D& field, double mu,
                                                    double tol) {
    const BifurcationVerdict v = classify_1d(field);
    std::vector<double> seeds{0.0};
    if ((v.kind == BifKind::SaddleNode || v.kind == BifKind::Pitchfork) && v.b != 0.0) {
        const double r = std::sqrt(std::abs(v.a * mu / v.b));
        if (v.kind == BifKind::SaddleNode) seeds = {r, -r};
        else seeds = {0.0, r, -r};
    }
    std::vector<EquilibriumBranch> out;
    const double hd = 1e-6;
    for (double u : seeds) {
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            const double fv = field.f(u, mu);
            const double fp = (field.f(u + hd, mu) - field.f(u - hd, mu)) / (2 * hd);
            if (fp == 0.0) break;
            const double step = fv / fp;
            u -= step;
            if (std::abs(step) < tol) {
                ok = true;
                break;
            }
        }
        if (!ok || !std::isfinite(u)) continue;  // non-convergent predictor: drop
        bool fresh = true;
        for (const auto& b : out)
            if (std::abs(b.u - u) < 1e-6) fresh = false;
        if (!fresh) continue;
        const double fp = (field.f(u + hd, mu) - field.f(u - hd, mu)) / (2 * hd);
        out.push_back({u, fp < 0.0});
    }
    return out;
}

namespace {

struct CycleProbe {
    bool escaped = false;
    bool collapsed = false;
    bool cycle = false;
    double radius = 0.0;
};

// Integrate du/dt = F(u, mu) (or its time reversal) from radius 0.05 and
// report where the orbit settles.
CycleProbe probe_cycle(const PlanarField& field, double mu, bool backward) {
    CycleProbe res;
    double u[2] = {0.05, 0.0};
    const double dt = backward ? -0.01 : 0.01;
    const int steps = 60000;
    const int window = steps / 10;
    double rsum = 0.0;
    int count = 0;
    double k1[2], k2[2], k3[2], k4[2], tmp[2];
    for (int s = 0; s < steps; ++s) {
        field.f(u, mu, k1);
        tmp[0] = u[0] + 0.5 * dt * k1[0];
        tmp[1] = u[1] + 0.5 * dt * k1[1];
        field.f(tmp, mu, k2);
        tmp[0] = u[0] + 0.5 * dt * k2[0];
        tmp[1] = u[1] + 0.5 * dt * k2[1];
        field.f(tmp, mu, k3);
        tmp[0] = u[0] + dt * k3[0];
        tmp[1] = u[1] + dt * k3[1];
        field.f(tmp, mu, k4);
        u[0] += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        u[1] += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        const double r = std::hypot(u[0], u[1]);
        if (!std::isfinite(r) || r > 4.0) {
            res.escaped = true;
            return res;
        }
        if (s >= steps - window) {
            rsum += r;
            ++count;
        }
    }
    res.radius = rsum / count;
    if (res.radius < 0.005) {
        res.collapsed = true;
        res.radius = 0.0;
    } else {
        res.cycle = true;
    }
    return res;
}

void planar_linearization(const PlanarField& field, double mu, double& alpha,
                          double& beta, bool& complex_pair) {
    const double h = 1e-5;
    double jm[4];
    double up[2], dn[2], x[2];
    for (int j = 0; j < 2; ++j) {
        x[0] = 0.0;
        x[1] = 0.0;
        x[j] = h;
        field.f(x, mu, up);
        x[j] = -h;
        field.f(x, mu, dn);
        jm[0 * 2 + j] = (up[0] - dn[0]) / (2 * h);
        jm[1 * 2 + j] = (up[1] - dn[1]) / (2 * h);
    }
    const double tr = jm[0] + jm[3];
    const double det = jm[0] * jm[3] - jm[1] * jm[2];
    const double disc = 0.25 * tr * tr - det;
    complex_pair = disc < 0.0;
    alpha = 0.5 * tr;
    beta = complex_pair ? std::sqrt(-disc) : 0.0;
}

} // namespace

BifurcationVerdict classify_hopf_2d(const PlanarField& field, double tol) {
    if (!field.f) throw std::invalid_argument("classify_hopf_2d: empty field");
    BifurcationVerdict v;
    double at0[2];
    const double zero[2] = {0.0, 0.0};
    field.f(zero, 0.0, at0);
    if (std::max(std::abs(at0[0]), std::abs(at0[1])) > tol) {
        v.kind = BifKind::Hyperbolic;
        v.note = "not_stationary";
        return v;
    }

    double a0, b0;
    bool cpx0;
    planar_linearization(field, 0.0, a0, b0, cpx0);
    if (!cpx0) {
        v.kind = std::abs(a0) > tol ? BifKind::Hyperbolic : BifKind::Degenerate;
        v.note = "real_eigenvalues";
        return v;
    }
    if (std::abs(b0) <= tol) {
        v.kind = BifKind::Degenerate;
        v.note = "imaginary_part_small";
        return v;
    }
    if (std::abs(a0) > tol) {
        v.kind = BifKind::Hyperbolic;
        v.note = "spiral_off_axis";
        v.a = a0;
        return v;
    }

    const double hm = 1e-3;
    double ap, bp, am, bm;
    bool cp, cm;
    planar_linearization(field, hm, ap, bp, cp);
    planar_linearization(field, -hm, am, bm, cm);
    const double da = (ap - am) / (2 * hm);
    if (std::abs(da) <= tol) {
        v.kind = BifKind::Degenerate;
        v.note = "transversality_fails";
        return v;
    }
    v.a = da;

    // criticality: a stable small cycle forward in time means supercritical;
    // an unstable one (stable for the reversed flow) means subcritical
    const double mus[2] = {field.mu_probe, -field.mu_probe};
    v.kind = BifKind::Hopf;
    for (int pass = 0; pass < 2; ++pass) {
        const bool backward = pass == 1;
        CycleProbe probes[2] = {probe_cycle(field, mus[0], backward),
                                probe_cycle(field, mus[1], backward)};
        if (probes[0].cycle != probes[1].cycle) {
            const int side = probes[0].cycle ? 0 : 1;
            v.cycle_radius = probes[side].radius;
            v.side = mus[side] > 0 ? MuSide::Positive : MuSide::Negative;
            // r^2 = -a mu / b at the cycle
            v.b = -da * mus[side] / (v.cycle_radius * v.cycle_radius);
            v.criticality = backward ? Criticality::Sub : Criticality::Super;
            v.note = backward ? "hopf_unstable_cycle" : "hopf_stable_cycle";
            return v;
        }
    }
    // no measurable cycle either way; report the sign convention only
    v.criticality = Criticality::Sub;
    v.b = std::abs(da);
    v.side = MuSide::NA;
    v.note = "hopf_cycle_unmeasured";
    return v;
}

BifurcationVerdict classify_game_point(const Game& game, const StepOperator& op,
                                       const Vec& w, const std::optional<Vec>& axis,
                                       double tol) {
    const std::size_t n = game.dim();
    if (w.size() != n) throw std::invalid_argument("classify_game_point: bad point");
    const auto pairs = eig_symmetric(gram(op.jac(w)));
    const Vec e1 = axis ? normalized(*axis) : pairs[0].vector;
    Vec e2;
    if (n == 2) {
        e2 = {-e1[1], e1[0]};
    } else {
        // take the top J_dagger direction with the largest residual off e1
        e2 = pairs[1].vector;
        axpy(e2, -dot(e2, e1), e1);
        e2 = normalized(e2);
    }

    ParamField1D f1;
    f1.f = [&game, &w, &e1, &e2](double u, double mu) {
        Vec p = w;
        axpy(p, u, e1);
        axpy(p, mu, e2);
        return dot(e1, joint_grad(game, p));
    };
    const BifurcationVerdict v1 = classify_1d(f1, tol);

    // planar reduction of the descent flow in the top stretch plane, with mu
    // unfolding radially (it shifts both real parts together)
    const Vec p1 = axis ? e1 : pairs[0].vector;
    Vec p2 = n == 2 ? Vec{-p1[1], p1[0]} : pairs[1].vector;
    PlanarField f2;
    f2.f = [&game, &w, &p1, &p2](const double* u, double mu, double* out) {
        Vec p = w;
        axpy(p, u[0], p1);
        axpy(p, u[1], p2);
        const Vec g = joint_grad(game, p);
        out[0] = -dot(p1, g) + mu * u[0];
        out[1] = -dot(p2, g) + mu * u[1];
    };
    const BifurcationVerdict v2 = classify_hopf_2d(f2, tol);

    auto strength = [](BifKind k) {
        switch (k) {
            case BifKind::Hopf: return 4;
            case BifKind::Pitchfork: return 3;
            case BifKind::SaddleNode: return 2;
            case BifKind::Hyperbolic: return 1;
            case BifKind::Degenerate: return 0;
        }
        return 0;
    };
    return strength(v2.kind) >= strength(v1.kind) ? v2 : v1;
}

std::string verdict_json(const BifurcationVerdict& v) {
    nlohmann::ordered_json j;
    const char* kind = v.kind == BifKind::SaddleNode   ? "saddle_node"
                       : v.kind == BifKind::Pitchfork  ? "pitchfork"
                       : v.kind == BifKind::Hopf       ? "hopf"
                       : v.kind == BifKind::Hyperbolic ? "hyperbolic"
                                                       : "degenerate";
    j["kind"] = kind;
    j["a"] = v.a;
    j["b"] = v.b;
    j["criticality"] = v.criticality == Criticality::Super ? "super"
                       : v.criticality == Criticality::Sub ? "sub"
                                                           : "na";
    j["side"] = v.side == MuSide::Positive   ? "positive"
                : v.side == MuSide::Negative ? "negative"
                                             : "na";
    j["note"] = v.note;
    j["odd_residual"] = v.odd_residual;
    j["cycle_radius"] = v.cycle_radius;
    return j.dump(2) + "\n";
}

} // namespace ridgewalk
