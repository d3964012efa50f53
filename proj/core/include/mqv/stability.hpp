#pragma once

#include <optional>

#include "mqv/rep.hpp"

namespace mqv {

/// Generic quiver-shaped linear data over F_p: a list of spaces and maps,
/// the common shape of a representation and of a graded module.
struct FpLinearData {
    long p = 5;
    std::vector<int> dims;
    struct Map {
        int src = 0, tgt = 0;
        std::vector<long> entries; // row-major dims[tgt] x dims[src]
    };
    std::vector<Map> maps;
    int total_dim() const;
};

FpLinearData fp_data_from_rep(const Representation& R, long p);
FpLinearData fp_data_from_graded(const GradedModule& M, long p);

struct SearchBounds {
    int total_dim = 9;
    long prime_max = 7;
};

struct SearchStats {
    Int tuples_enumerated = 0;
    Int expected_tuples = 0; // product of Gaussian binomial sums
    Int invariant_tuples = 0;
};

/// An exactly verified invariant subspace tuple: per-space echelon bases over
/// F_p (each dims[k] x sub_dim matrix of column vectors) plus its pairing.
struct Witness {
    std::vector<ExactMatrix> bases;
    DimVector sub_dims;
    Rat pairing_value;
};

/// Exhaustive search over all proper nonzero invariant subspace tuples;
/// returns one minimizing the theta-pairing, or nullopt when none exist.
/// King convention (forced by the theta^gtr lift): M semistable iff every
/// proper nonzero subrepresentation pairs >= 0, stable iff strictly > 0, so
/// a pairing < 0 destabilizes semistability and = 0 destabilizes stability.
std::optional<Witness> destabilizer(const FpLinearData& data, const std::vector<Rat>& theta,
                                    const SearchBounds& bounds, SearchStats* stats = nullptr);

enum class VerdictKind { CertifiedStable, CertifiedSemistableOnly, UnstableWithWitness, Inconclusive };

std::string to_string(VerdictKind k);

/// Certified outcome of the mod-p search.  Certificates are one-directional:
/// the absence of mod-p destabilizers lifts to the source field (a
/// destabilizer there saturates to one mod p), while a mod-p witness with
/// positive pairing does NOT disprove stability over Q and is reported as
/// Inconclusive unless the input was natively over F_p.
struct StabilityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    long prime = 0;
    std::optional<Witness> witness;
    SearchStats stats;
};

StabilityVerdict verdict(const Representation& R, const StabilityVector& theta, long p,
                         const SearchBounds& bounds = {});
StabilityVerdict verdict_graded(const GradedModule& M, const StabilityVector& theta_gtr,
                                long p, const SearchBounds& bounds = {});

/// Runs verdict on R with theta and on induce(R, N) with the lifted
/// stability; the two must agree (the Ind-compatibility proposition).
struct IndCompatReport {
    StabilityVerdict rep_side;
    StabilityVerdict graded_side;
    bool agree = false;
};

IndCompatReport ind_compat_report(const Representation& R, const StabilityVector& theta,
                                  int N, const Rat& T, long p,
                                  const SearchBounds& bounds = {});

/// First prime within bounds usable for R: compatible with the scalar field
/// and dividing no entry denominator.  Tries `preferred` first.
long usable_prime(const Representation& R, long preferred, const SearchBounds& bounds = {});

/// Gaussian binomial [n choose k]_p.
Int gaussian_binomial(int n, int k, long p);

} // namespace mqv
