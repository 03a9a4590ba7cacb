#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nqac/model.hpp"

namespace nqac {

// Physical spin (i, c) has index i * C + c.  Spin states are bit masks with
// bit a set meaning sigma_a = -1.
struct PSpinTerms {
    int p = 2;
    int q = 2;
    double J = 1.0;
    double lambda = 0.0;
    Coupling coupling = Coupling::ferro;
};

struct EncodedInstance {
    int N = 0;
    int C = 1;
    std::map<std::pair<int, int>, double> couplings;  // i < j
    std::map<int, double> fields;
    std::optional<PSpinTerms> pspin;  // set by encode_pspin

    int total_spins() const { return N * C; }
    double coupling(int a, int b) const;
    void validate() const;
};

enum class HamiltonianForm { pspin_ferro, pspin_antiferro, pairwise };
std::string to_string(HamiltonianForm f);

constexpr int kMaxEnumerationSpins = 24;
constexpr int kMaxDiagonalizationSpins = 12;

EncodedInstance encode(const std::vector<double>& logical_h, const std::vector<std::vector<double>>& logical_J, int C,
                       double gamma_pen);
// Uniform p-spin instance; its pairwise couplings are filled in only for p = q = 2.
EncodedInstance encode_pspin(int N, int C, const PSpinTerms& terms);

// Pairwise form: H = -sum_{a != b} J_ab s_a s_b - sum_a h_a s_a (each pair counted twice).
// p-spin form:   H = -s J N (sum s / N)^p - lambda sum_i (sum_c s_ic)^q.
double classical_energy(const EncodedInstance& inst, HamiltonianForm form, std::uint64_t state);

struct SpectrumResult {
    std::vector<double> energies;
    std::vector<std::uint64_t> degeneracies;
    std::optional<double> gap;
};

// Exact enumeration (Gray code, chunked over threads).  code_space_only
// restricts to states with every logical block uniform.
SpectrumResult classical_spectrum(const EncodedInstance& inst, HamiltonianForm form, bool code_space_only = false,
                                  int jobs = 1);

// E1 - E0 of -gamma sum sigma^x + H_Z, counting multiplicity.
double quantum_gap(const EncodedInstance& inst, HamiltonianForm form, double gamma);
// Lowest `count` eigenvalues, ascending.
std::vector<double> quantum_levels(const EncodedInstance& inst, HamiltonianForm form, double gamma, int count);

// Majority vote per logical block; ties decode to +1.
std::vector<int> decode_majority(std::uint64_t state, int N, int C);
std::uint64_t codeword(const std::vector<int>& logical, int C);

void write_triplets(std::ostream& os, const EncodedInstance& inst);
EncodedInstance read_triplets(std::istream& is);

}  // namespace nqac
