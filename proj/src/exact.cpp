#include "nqac/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "nqac/parallel.hpp"

namespace nqac {

namespace {

int spin(std::uint64_t state, int a) { return (state >> a) & 1u ? -1 : 1; }

void check_form(const EncodedInstance& inst, HamiltonianForm form) {
    if (form != HamiltonianForm::pairwise && !inst.pspin)
        throw InputError("p-spin form needs an instance built by encode_pspin");
}

double form_sign(HamiltonianForm form) { return form == HamiltonianForm::pspin_antiferro ? -1.0 : 1.0; }

// energy from the total and block-power sums; integer inputs keep this exact
double pspin_energy(const EncodedInstance& inst, HamiltonianForm form, long S, double block_power_sum) {
    const auto& t = *inst.pspin;
    const double N = inst.N;
    return -form_sign(form) * t.J * N * signed_pow(double(S) / N, t.p) - t.lambda * block_power_sum;
}

struct Dense {
    int n = 0;
    std::vector<double> J;  // n x n, symmetric, zero diagonal
    std::vector<double> h;
};

Dense dense_pairwise(const EncodedInstance& inst) {
    Dense d;
    d.n = inst.total_spins();
    d.J.assign(std::size_t(d.n) * d.n, 0.0);
    d.h.assign(d.n, 0.0);
    for (const auto& [ij, v] : inst.couplings) {
        d.J[std::size_t(ij.first) * d.n + ij.second] = v;
        d.J[std::size_t(ij.second) * d.n + ij.first] = v;
    }
    for (const auto& [i, v] : inst.fields) d.h[i] = v;
    return d;
}

double energy_scale(const EncodedInstance& inst, HamiltonianForm form) {
    double s = 1.0;
    if (form == HamiltonianForm::pairwise) {
        for (const auto& [ij, v] : inst.couplings) s += 2 * std::abs(v);
        for (const auto& [i, v] : inst.fields) s += std::abs(v);
    } else {
        const auto& t = *inst.pspin;
        s += t.J * inst.N * std::pow(inst.C, t.p) + t.lambda * inst.N * std::pow(inst.C, t.q);
    }
    return s;
}

using Histogram = std::map<long long, std::pair<double, std::uint64_t>>;

void add(Histogram& H, double E, std::uint64_t count, double quantum) {
    auto& slot = H[std::llround(E / quantum)];
    if (slot.second == 0 || E < slot.first) slot.first = E;
    slot.second += count;
}

SpectrumResult collapse(std::vector<Histogram>& parts, double quantum) {
    Histogram all;
    for (auto& h : parts)
        for (const auto& [k, v] : h) add(all, v.first, v.second, quantum);
    SpectrumResult r;
    for (const auto& [k, v] : all) {
        // neighbouring buckets can split one level straddling a boundary
        if (!r.energies.empty() && v.first - r.energies.back() <= 2 * quantum) {
            r.degeneracies.back() += v.second;
            continue;
        }
        r.energies.push_back(v.first);
        r.degeneracies.push_back(v.second);
    }
    return r;
}

}  // namespace

std::string to_string(HamiltonianForm f) {
    switch (f) {
        case HamiltonianForm::pspin_ferro: return "pspin_ferro";
        case HamiltonianForm::pspin_antiferro: return "pspin_antiferro";
        case HamiltonianForm::pairwise: return "pairwise";
    }
    return "?";
}

double EncodedInstance::coupling(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = couplings.find({a, b});
    return it == couplings.end() ? 0.0 : it->second;
}

void EncodedInstance::validate() const {
    if (N < 1 || C < 1) throw InputError("instance needs N >= 1 and C >= 1");
    if (total_spins() > kMaxEnumerationSpins)
        throw InputError("instance has " + std::to_string(total_spins()) + " spins; the cap is " +
                         std::to_string(kMaxEnumerationSpins));
    for (const auto& [ij, v] : couplings) {
        if (!(ij.first < ij.second) || ij.first < 0 || ij.second >= total_spins())
            throw InputError("coupling index out of range or not ordered i < j");
        if (!std::isfinite(v)) throw InputError("non-finite coupling");
    }
    for (const auto& [i, v] : fields) {
        if (i < 0 || i >= total_spins()) throw InputError("field index out of range");
        if (!std::isfinite(v)) throw InputError("non-finite field");
    }
}

EncodedInstance encode(const std::vector<double>& h, const std::vector<std::vector<double>>& Jl, int C,
                       double gamma_pen) {
    const int N = int(h.size());
    if (int(Jl.size()) != N) throw InputError("logical_J must be N x N");
    for (const auto& row : Jl)
        if (int(row.size()) != N) throw InputError("logical_J must be N x N");
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (Jl[i][j] != Jl[j][i]) throw InputError("logical_J must be symmetric");
    EncodedInstance inst;
    inst.N = N;
    inst.C = C;
    if (N < 1 || C < 1) throw InputError("encode needs N >= 1 and C >= 1");
    if (N * C > kMaxEnumerationSpins) throw InputError("encoded instance exceeds the spin cap");
    for (int i = 0; i < N; ++i) {
        for (int c = 0; c < C; ++c) {
            const int a = i * C + c;
            if (h[i] != 0.0) inst.fields[a] = C * h[i];
            for (int c2 = c + 1; c2 < C; ++c2)
                if (gamma_pen != 0.0) inst.couplings[{a, i * C + c2}] = gamma_pen;
            for (int j = i + 1; j < N; ++j)
                for (int c2 = 0; c2 < C; ++c2)
                    if (Jl[i][j] != 0.0) inst.couplings[{a, j * C + c2}] = Jl[i][j];
        }
    }
    inst.validate();
    return inst;
}

EncodedInstance encode_pspin(int N, int C, const PSpinTerms& t) {
    if (t.p < 2 || t.q < 2) throw InputError("encode_pspin needs p, q >= 2");
    EncodedInstance inst;
    inst.N = N;
    inst.C = C;
    inst.pspin = t;
    if (t.p == 2 && t.q == 2) {
        // -s J N (S/N)^2 - lam sum_i S_i^2 differs from this pairwise form by a constant
        const double s = t.coupling == Coupling::ferro ? 1.0 : -1.0;
        for (int a = 0; a < N * C; ++a)
            for (int b = a + 1; b < N * C; ++b) inst.couplings[{a, b}] = s * t.J / N + (a / C == b / C ? t.lambda : 0.0);
    }
    inst.validate();
    return inst;
}

double classical_energy(const EncodedInstance& inst, HamiltonianForm form, std::uint64_t state) {
    check_form(inst, form);
    const int n = inst.total_spins();
    if (form == HamiltonianForm::pairwise) {
        double E = 0.0;
        for (const auto& [ij, v] : inst.couplings) E -= 2 * v * spin(state, ij.first) * spin(state, ij.second);
        for (const auto& [i, v] : inst.fields) E -= v * spin(state, i);
        return E;
    }
    long S = 0;
    double pw = 0.0;
    for (int i = 0; i < inst.N; ++i) {
        long Si = 0;
        for (int c = 0; c < inst.C; ++c) Si += spin(state, i * inst.C + c);
        S += Si;
        pw += signed_pow(double(Si), inst.pspin->q);
    }
    (void)n;
    return pspin_energy(inst, form, S, pw);
}

SpectrumResult classical_spectrum(const EncodedInstance& inst, HamiltonianForm form, bool code_space_only, int jobs) {
    inst.validate();
    check_form(inst, form);
    const int n = inst.total_spins();
    const double quantum = 1e-9 * energy_scale(inst, form);

    if (code_space_only) {
        const std::uint64_t states = std::uint64_t(1) << inst.N;
        std::vector<Histogram> parts(1);
        for (std::uint64_t s = 0; s < states; ++s) {
            std::vector<int> logical(inst.N);
            for (int i = 0; i < inst.N; ++i) logical[i] = (s >> i) & 1u ? -1 : 1;
            add(parts[0], classical_energy(inst, form, codeword(logical, inst.C)), 1, quantum);
        }
        return collapse(parts, quantum);
    }

    const std::uint64_t states = std::uint64_t(1) << n;
    // chunking is fixed so rounding, and therefore the output, does not depend on jobs
    const int chunk_bits = std::clamp(n - 4, 0, 6);
    const std::uint64_t chunks = std::uint64_t(1) << chunk_bits;
    const std::uint64_t len = states / chunks;
    std::vector<Histogram> parts(chunks);
    const Dense d = form == HamiltonianForm::pairwise ? dense_pairwise(inst) : Dense{};

    parallel_for(chunks, jobs, [&](std::size_t c) {
        Histogram& H = parts[c];
        std::uint64_t i = c * len;
        std::uint64_t g = i ^ (i >> 1);
        if (form == HamiltonianForm::pairwise) {
            std::vector<int> s(n);
            std::vector<double> loc(n, 0.0);
            for (int a = 0; a < n; ++a) s[a] = spin(g, a);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) loc[a] += d.J[std::size_t(a) * n + b] * s[b];
            double E = classical_energy(inst, form, g);
            for (std::uint64_t t = 0;; ++t) {
                add(H, E, 1, quantum);
                if (t + 1 == len) break;
                const int a = std::countr_zero(i + 1);
                ++i;
                E += 2.0 * s[a] * (2.0 * loc[a] + d.h[a]);
                for (int b = 0; b < n; ++b) loc[b] -= 2.0 * d.J[std::size_t(b) * n + a] * s[a];
                s[a] = -s[a];
            }
        } else {
            const int C = inst.C, q = inst.pspin->q;
            std::vector<long> block(inst.N, 0);
            long S = 0;
            for (int a = 0; a < n; ++a) {
                block[a / C] += spin(g, a);
                S += spin(g, a);
            }
            double pw = 0.0;
            for (long b : block) pw += signed_pow(double(b), q);
            std::vector<int> s(n);
            for (int a = 0; a < n; ++a) s[a] = spin(g, a);
            for (std::uint64_t t = 0;; ++t) {
                add(H, pspin_energy(inst, form, S, pw), 1, quantum);
                if (t + 1 == len) break;
                const int a = std::countr_zero(i + 1);
                ++i;
                const int b = a / C;
                pw -= signed_pow(double(block[b]), q);
                block[b] -= 2 * s[a];
                S -= 2 * s[a];
                pw += signed_pow(double(block[b]), q);
                s[a] = -s[a];
            }
        }
    });
    return collapse(parts, quantum);
}

std::vector<double> quantum_levels(const EncodedInstance& inst, HamiltonianForm form, double gamma, int count) {
    inst.validate();
    check_form(inst, form);
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be finite and >= 0");
    const int n = inst.total_spins();
    if (n > kMaxDiagonalizationSpins)
        throw InputError("dense diagonalization is capped at " + std::to_string(kMaxDiagonalizationSpins) + " spins");
    const int dim = 1 << n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        H(s, s) = classical_energy(inst, form, std::uint64_t(s));
        for (int a = 0; a < n; ++a) H(s, s ^ (1 << a)) = -gamma;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("diagonalization failed");
    std::vector<double> out;
    for (int k = 0; k < std::min(count, dim); ++k) out.push_back(es.eigenvalues()(k));
    return out;
}

double quantum_gap(const EncodedInstance& inst, HamiltonianForm form, double gamma) {
    auto ev = quantum_levels(inst, form, gamma, 2);
    if (ev.size() < 2) throw InputError("a gap needs at least two states");
    return ev[1] - ev[0];
}

std::vector<int> decode_majority(std::uint64_t state, int N, int C) {
    std::vector<int> out(N);
    for (int i = 0; i < N; ++i) {
        int down = 0;
        for (int c = 0; c < C; ++c) down += (state >> (i * C + c)) & 1u;
        out[i] = 2 * down > C ? -1 : 1;
    }
    return out;
}

std::uint64_t codeword(const std::vector<int>& logical, int C) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < logical.size(); ++i)
        if (logical[i] < 0)
            for (int c = 0; c < C; ++c) s |= std::uint64_t(1) << (i * C + c);
    return s;
}

void write_triplets(std::ostream& os, const EncodedInstance& inst) {
    char buf[64];
    os << inst.N << ' ' << inst.C << '\n';
    if (inst.pspin) {
        const auto& t = *inst.pspin;
        std::snprintf(buf, sizeof buf, "%.17g", t.J);
        os << "# pspin " << t.p << ' ' << t.q << ' ' << buf;
        std::snprintf(buf, sizeof buf, "%.17g", t.lambda);
        os << ' ' << buf << ' ' << to_string(t.coupling) << '\n';
    }
    // fields and couplings interleaved in (i, j) order
    std::map<std::pair<int, int>, double> rows(inst.couplings);
    for (const auto& [i, v] : inst.fields) rows[{i, i}] = v;
    for (const auto& [ij, v] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ij.first << ' ' << ij.second << ' ' << buf << '\n';
    }
}

EncodedInstance read_triplets(std::istream& is) {
    EncodedInstance inst;
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        if (line[line.find_first_not_of(" \t")] == '#') {
            std::string hash, tag, coupling, J, lam;
            ls >> hash >> tag;
            if (tag == "pspin") {
                PSpinTerms t;
                ls >> t.p >> t.q >> J >> lam >> coupling;
                if (!ls) throw InputError("malformed pspin line " + std::to_string(lineno));
                t.J = std::strtod(J.c_str(), nullptr);
                t.lambda = std::strtod(lam.c_str(), nullptr);
                t.coupling = coupling == "antiferro" ? Coupling::antiferro : Coupling::ferro;
                inst.pspin = t;
            }
            continue;
        }
        if (!header) {
            if (!(ls >> inst.N >> inst.C)) throw InputError("triplet header must be 'N C'");
            header = true;
            continue;
        }
        int i, j;
        std::string v;
        if (!(ls >> i >> j >> v)) throw InputError("malformed triplet on line " + std::to_string(lineno));
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') throw InputError("bad value on line " + std::to_string(lineno));
        if (i == j)
            inst.fields[i] = x;
        else
            inst.couplings[{std::min(i, j), std::max(i, j)}] = x;
    }
    if (!header) throw InputError("triplet file has no header");
    inst.validate();
    return inst;
}

}  // namespace nqac
