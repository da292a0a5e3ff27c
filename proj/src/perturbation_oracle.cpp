#include "bhcav/perturbation_oracle.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "bhcav/errors.hpp"

namespace bhcav {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

int integer_photons(const Occupation& occ) {
    const double r = std::round(occ.n_c);
    if (r != occ.n_c) throw ValidationError("perturbation oracle needs an integer photon number");
    return static_cast<int>(r);
}

double term(double numerator, double denominator, const char* name) {
    if (numerator == 0.0) return 0.0;
    if (std::abs(denominator) < 1e-12) throw PoleError(name, denominator);
    return numerator / denominator;
}

// Truncated three-mode Fock space, each number in [0, max].
class FockBox {
public:
    FockBox(int max_g, int max_e, int max_c) : dg_(max_g + 1), de_(max_e + 1), dc_(max_c + 1) {}

    int dim() const { return dg_ * de_ * dc_; }
    int index(int ng, int ne, int nc) const { return (ng * de_ + ne) * dc_ + nc; }
    std::array<int, 3> numbers(int idx) const {
        return {idx / (de_ * dc_), (idx / dc_) % de_, idx % dc_};
    }
    bool on_edge(int idx) const {
        const auto n = numbers(idx);
        return n[0] == dg_ - 1 || n[1] == de_ - 1 || n[2] == dc_ - 1;
    }

    // Annihilation operator of mode 0 (g), 1 (e) or 2 (c).
    SpMat lowering(int mode) const {
        std::vector<Eigen::Triplet<double>> t;
        for (int idx = 0; idx < dim(); ++idx) {
            auto n = numbers(idx);
            if (n[mode] == 0) continue;
            const double amp = std::sqrt(static_cast<double>(n[mode]));
            --n[mode];
            t.emplace_back(index(n[0], n[1], n[2]), idx, amp);
        }
        SpMat m(dim(), dim());
        m.setFromTriplets(t.begin(), t.end());
        return m;
    }

    SpMat identity() const {
        SpMat m(dim(), dim());
        m.setIdentity();
        return m;
    }

private:
    int dg_;
    int de_;
    int dc_;
};

}  // namespace

const char* to_string(Channel ch) {
    switch (ch) {
        case Channel::b: return "b";
        case Channel::b_dag: return "b+";
        case Channel::c: return "c";
        case Channel::c_dag: return "c+";
        case Channel::a: return "a";
        case Channel::a_dag: return "a+";
        case Channel::ba: return "ba";
        case Channel::ca_dag: return "ca+";
        case Channel::ac_dag: return "ac+";
        case Channel::a_dag_b_dag: return "a+b+";
    }
    return "?";
}

std::array<IntermediateState, 10> enumerate_states(const Occupation& occ,
                                                   const ChemicalPotentials& mu,
                                                   const PhysicalParams& p) {
    validate(occ);
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    const double nc = integer_photons(occ);
    const double mg = mu.mu_g;
    const double me = mu.mu_e;
    const double ec = p.eps_c;
    const double Ug = p.U_g;
    const double Ue = p.U_e;
    const double Ueg = p.U_eg;
    using std::sqrt;
    return {{
        {{+1, 0, 0}, sqrt(ng + 1), mg - Ug * ng - Ueg * ne, Channel::b},
        {{-1, 0, 0}, sqrt(ng), -mg + Ug * (ng - 1) + Ueg * ne, Channel::b_dag},
        {{0, +1, 0}, sqrt(ne + 1), me - Ue * ne - Ueg * ng, Channel::c},
        {{0, -1, 0}, sqrt(ne), -me + Ue * (ne - 1) + Ueg * ng, Channel::c_dag},
        {{0, 0, +1}, sqrt(nc + 1), -ec, Channel::a},
        {{0, 0, -1}, sqrt(nc), ec, Channel::a_dag},
        {{+1, 0, +1}, sqrt(ng + 1) * sqrt(nc + 1), mg - ec - Ug * ng - Ueg * ne, Channel::ba},
        {{0, +1, -1}, sqrt(ne + 1) * sqrt(nc), me + ec - Ue * ne - Ueg * ng, Channel::ca_dag},
        {{0, -1, +1}, sqrt(ne) * sqrt(nc + 1), -me - ec + Ue * (ne - 1) + Ueg * ng, Channel::ac_dag},
        {{-1, 0, -1}, sqrt(ng) * sqrt(nc), -mg + ec + Ug * (ng - 1) + Ueg * ne, Channel::a_dag_b_dag},
    }};
}

SecondOrderCoefficients e2_closed_form(const Occupation& occ, const ChemicalPotentials& mu,
                                       const PhysicalParams& p) {
    validate(occ);
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    const double nc = occ.n_c;
    const double mg = mu.mu_g;
    const double me = mu.mu_e;
    const double ec = p.eps_c;
    const double zJg = p.z * p.J_g;
    const double zJe = p.z * p.J_e;

    SecondOrderCoefficients c;
    c.c_g = zJg +
            zJg * zJg *
                (term(ng + 1, mg - p.U_g * ng - p.U_eg * ne, "mu_g-U_g n_g-U_eg n_e") +
                 term(ng, -mg + p.U_g * (ng - 1) + p.U_eg * ne, "-mu_g+U_g(n_g-1)+U_eg n_e")) +
            p.f_sq * (term((ne + 1) * nc, me + ec - p.U_e * ne - p.U_eg * ng,
                           "mu_e+eps_c-U_e n_e-U_eg n_g") +
                      term(ne * (nc + 1), -me - ec + p.U_e * (ne - 1) + p.U_eg * ng,
                           "-mu_e-eps_c+U_e(n_e-1)+U_eg n_g"));
    c.c_e = zJe +
            zJe * zJe *
                (term(ne + 1, me - p.U_e * ne - p.U_eg * ng, "mu_e-U_e n_e-U_eg n_g") +
                 term(ne, -me + p.U_e * (ne - 1) + p.U_eg * ng, "-mu_e+U_e(n_e-1)+U_eg n_g")) +
            p.f_sq * (term(ng * nc, -mg + ec + p.U_g * (ng - 1) + p.U_eg * ne,
                           "-mu_g+eps_c+U_g(n_g-1)+U_eg n_e") +
                      term((ng + 1) * (nc + 1), mg - ec - p.U_g * ng - p.U_eg * ne,
                           "mu_g-eps_c-U_g n_g-U_eg n_e"));
    c.c_mix = p.f_sq * (nc / ec - (nc + 1) / ec);
    return c;
}

StateSumResult state_sum(const Occupation& occ, const ChemicalPotentials& mu,
                         const PhysicalParams& p, double phi_g, double phi_e) {
    validate(occ);
    const int ng = occ.n_g;
    const int ne = occ.n_e;
    const int nc = integer_photons(occ);
    const FockBox box(ng + 2, ne + 2, nc + 2);

    const SpMat b = box.lowering(0);
    const SpMat c = box.lowering(1);
    const SpMat a = box.lowering(2);
    const SpMat bd = b.transpose();
    const SpMat cd = c.transpose();
    const SpMat ad = a.transpose();
    const SpMat id = box.identity();

    const double zJg = p.z * p.J_g;
    const double zJe = p.z * p.J_e;
    const double f = std::sqrt(p.f_sq);

    const SpMat hop = -zJg * phi_g * SpMat(bd + b) + zJg * phi_g * phi_g * id -
                      zJe * phi_e * SpMat(cd + c) + zJe * phi_e * phi_e * id;
    const SpMat cav_abs = SpMat(phi_e * b + phi_g * cd) - phi_g * phi_e * id;
    const SpMat cav_emit = SpMat(phi_e * bd + phi_g * c) - phi_g * phi_e * id;
    const SpMat h_int = hop + f * SpMat(a * cav_abs) + f * SpMat(ad * cav_emit);

    Eigen::VectorXd ground = Eigen::VectorXd::Zero(box.dim());
    const int i0 = box.index(ng, ne, nc);
    ground[i0] = 1.0;
    const Eigen::VectorXd v = h_int * ground;

    const double e0 = zero_order_energy(occ, mu, p);
    StateSumResult out;
    out.first_order = v[i0];
    for (int k = 0; k < box.dim(); ++k) {
        if (k == i0 || v[k] == 0.0) continue;
        const auto n = box.numbers(k);
        if (box.on_edge(k)) out.outer_shell_weight += v[k] * v[k];
        const Occupation occ_k{n[0], n[1], static_cast<double>(n[2])};
        const double denom = e0 - zero_order_energy(occ_k, mu, p);
        if (std::abs(denom) < 1e-12) throw PoleError("E_0 - E_k", denom);
        out.second_order += v[k] * v[k] / denom;
        out.terms.push_back({{n[0] - ng, n[1] - ne, n[2] - nc}, v[k], denom});
    }
    return out;
}

double e2_state_sum(const Occupation& occ, const ChemicalPotentials& mu, const PhysicalParams& p,
                    double phi_g, double phi_e) {
    return state_sum(occ, mu, p, phi_g, phi_e).total();
}

namespace {

// Coupling multiplying the bare matrix element of each channel at phi_g = phi_e = 1.
double channel_coupling(Channel ch, const PhysicalParams& p) {
    switch (ch) {
        case Channel::b:
        case Channel::b_dag: return p.z * p.J_g;
        case Channel::c:
        case Channel::c_dag: return p.z * p.J_e;
        default: return std::sqrt(p.f_sq);
    }
}

CheckResult check(std::string name, double residual) {
    return {std::move(name), residual, std::abs(residual) < kOracleTolerance};
}

}  // namespace

EquivalenceReport verify_against(const SecondOrderCoefficients& claimed, const Occupation& occ,
                                 const ChemicalPotentials& mu, const PhysicalParams& p) {
    EquivalenceReport r;
    r.occ = occ;
    r.mu = mu;
    r.params = p;
    r.coefficients = claimed;

    const auto only_g = state_sum(occ, mu, p, 1.0, 0.0);
    const auto only_e = state_sum(occ, mu, p, 0.0, 1.0);
    const auto both = state_sum(occ, mu, p, 1.0, 1.0);
    const double zJg = p.z * p.J_g;
    const double zJe = p.z * p.J_e;

    r.checks.push_back(check("state_sum(1,0) - c_g", only_g.total() - claimed.c_g));
    r.checks.push_back(check("state_sum(0,1) - c_e", only_e.total() - claimed.c_e));
    r.checks.push_back(check("state_sum(1,1) - (c_g + c_e + c_mix)",
                             both.total() - (claimed.c_g + claimed.c_e + claimed.c_mix)));
    r.checks.push_back(check("c_mix + |f|^2/eps_c", claimed.c_mix + p.f_sq / p.eps_c));
    r.checks.push_back(check("<0|H_I|0> - (zJ_g + zJ_e)", both.first_order - (zJg + zJe)));

    // Every reached state is one of the ten enumerated ones with the same
    // weight and energy difference, and nothing else is reached.
    const auto states = enumerate_states(occ, mu, p);
    double enumerated_sum = 0.0;
    double term_mismatch = 0.0;
    double denom_mismatch = 0.0;
    const double e0 = zero_order_energy(occ, mu, p);
    for (const auto& s : states) {
        const Occupation occ_k{occ.n_g + s.delta[0], occ.n_e + s.delta[1], occ.n_c + s.delta[2]};
        if (s.amplitude != 0.0) {
            denom_mismatch = std::max(denom_mismatch,
                                      std::abs(s.denom - (e0 - zero_order_energy(occ_k, mu, p))));
            const double w = channel_coupling(s.channel, p) * s.amplitude;
            enumerated_sum += w * w / s.denom;
        }
    }
    for (const auto& t : both.terms) {
        const IntermediateState* match = nullptr;
        for (const auto& s : states)
            if (s.delta == t.delta) match = &s;
        if (match == nullptr) {
            term_mismatch = std::max(term_mismatch, std::abs(t.matrix_element));
            continue;
        }
        const double w = channel_coupling(match->channel, p) * match->amplitude;
        term_mismatch = std::max({term_mismatch, std::abs(std::abs(t.matrix_element) - w),
                                  std::abs(t.denom - match->denom)});
    }
    r.checks.push_back(check("state_sum second order - enumerated ten states",
                             both.second_order - enumerated_sum));
    r.checks.push_back(check("per-state weight/denominator mismatch", term_mismatch));
    r.checks.push_back(check("enumerated denominators - zero-order differences", denom_mismatch));
    r.checks.push_back(check("truncation edge weight", both.outer_shell_weight));

    r.pass = true;
    for (const auto& c : r.checks) r.pass = r.pass && c.pass;
    return r;
}

EquivalenceReport verify_equivalence(const Occupation& occ, const ChemicalPotentials& mu,
                                     const PhysicalParams& p) {
    return verify_against(e2_closed_form(occ, mu, p), occ, mu, p);
}

OracleCase random_stable_case(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto integer = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    OracleCase cs;
    PhysicalParams& p = cs.params;
    p.z = integer(1, 6);
    p.J_g = uniform(0.5, 2.0);
    p.J_e = uniform(0.5, 2.0);
    p.U_g = uniform(5.0, 60.0);
    p.U_e = uniform(5.0, 60.0);
    p.U_eg = uniform(-0.9, 0.9) * std::sqrt(p.U_g * p.U_e);
    p.f_sq = uniform(0.0, 40.0);
    p.eps_c = uniform(5.0, 80.0);
    p.eps_g = 0.0;
    p.eps_e = p.eps_c;
    cs.occ = {integer(0, 2), integer(0, 2), static_cast<double>(integer(0, 2))};

    for (;;) {
        cs.mu = {uniform(-40.0, 120.0), uniform(-40.0, 120.0)};
        bool ok = true;
        for (const auto& s : enumerate_states(cs.occ, cs.mu, p)) ok = ok && std::abs(s.denom) >= 0.5;
        if (ok) break;
    }
    return cs;
}

EquivalenceReport verify_seed(std::uint64_t seed) {
    const auto cs = random_stable_case(seed);
    auto r = verify_equivalence(cs.occ, cs.mu, cs.params);
    r.seed = seed;
    r.has_seed = true;
    return r;
}

std::string EquivalenceReport::to_text() const {
    std::ostringstream os;
    char buf[256];
    os << "oracle-report\n";
    if (has_seed) os << "seed: " << seed << "\n";
    std::snprintf(buf, sizeof buf, "occupation: n_g=%d n_e=%d n_c=%.12g\n", occ.n_g, occ.n_e,
                  occ.n_c);
    os << buf;
    std::snprintf(buf, sizeof buf, "mu: mu_g=%.12g mu_e=%.12g\n", mu.mu_g, mu.mu_e);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "params: J_g=%.12g J_e=%.12g z=%d U_g=%.12g U_e=%.12g U_eg=%.12g f_sq=%.12g "
                  "eps_c=%.12g\n",
                  params.J_g, params.J_e, params.z, params.U_g, params.U_e, params.U_eg,
                  params.f_sq, params.eps_c);
    os << buf;
    std::snprintf(buf, sizeof buf, "coefficients: c_g=%.12g c_e=%.12g c_mix=%.12g |c_mix|=%.12g\n",
                  coefficients.c_g, coefficients.c_e, coefficients.c_mix,
                  std::abs(coefficients.c_mix));
    os << buf;
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "check: %s residual=%.3e %s\n", c.name.c_str(), c.residual,
                      c.pass ? "pass" : "FAIL");
        os << buf;
    }
    os << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace bhcav
