#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "mqv/rep.hpp"
#include "mqv/stability.hpp"

namespace mqv {

struct Bounds {
    int subspace_total_dim = 9;
    long prime_max = 7;
    int sampler_box = 3;
    int sampler_retries = 64;
};

/// One parsed instance file: field, quiver, alpha, theta, q, N, optional T,
/// seed, search/sampler bounds and optional explicit matrices.
struct InstanceFile {
    Field field = Field::rational();
    Quiver quiver;
    DimVector alpha;
    StabilityVector theta;
    std::vector<Scalar> q;
    int N = 2;
    std::optional<Rat> T;
    std::uint64_t seed = 0;
    Bounds bounds;
    std::map<std::string, ExactMatrix> matrices; // keyed by arrow name (with *)

    DoubledQuiver doubled() const { return make_double(quiver); }
    bool has_matrices() const { return !matrices.empty(); }
    Representation explicit_rep() const; // from `matrices`; throws if absent
    Rat effective_T() const;
};

/// Parses the JSON instance format; schema violations raise ParseError with a
/// position where the underlying JSON parser provides one.
InstanceFile parse_instance(const std::string& json_text);

/// Canonical serialization (sorted keys, canonical scalar strings).
/// parse . serialize is the identity on parsed instances.
std::string canonical_instance_json(const InstanceFile& inst);

/// FNV-1a 64-bit digest, hex, of the canonical serialization.
std::string instance_digest(const InstanceFile& inst);

std::string fnv1a_hex(const std::string& data);

/// Default working prime: the instance's own characteristic, else the
/// smallest prime within bounds compatible with the scalar field
/// (p = 1 mod m for cyclotomic order m).
long default_prime(const InstanceFile& inst);

} // namespace mqv
