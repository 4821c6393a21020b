#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace baleq {

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAUnit : RingError {
    NotAUnit() : RingError("NotAUnit") {}
};
struct ResidueFieldTooSmall : RingError {
    ResidueFieldTooSmall() : RingError("ResidueFieldTooSmall") {}
};
struct RingMismatch : RingError {
    RingMismatch() : RingError("RingMismatch: operands live in different rings") {}
};

// The local ring Z/p^k with maximal ideal (p).
class RingSpec {
public:
    RingSpec(std::uint64_t p, unsigned k);

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint64_t modulus() const { return modulus_; }
    bool has_big_residue_field() const { return p_ >= 3; }

    // "Z/p^k", or "Z/p" when k == 1.
    std::string designator() const;
    static RingSpec parse(const std::string& designator);

    friend bool operator==(const RingSpec& a, const RingSpec& b) {
        return a.p_ == b.p_ && a.k_ == b.k_;
    }
    friend bool operator!=(const RingSpec& a, const RingSpec& b) { return !(a == b); }

private:
    std::uint64_t p_;
    unsigned k_;
    std::uint64_t modulus_;
};

class RingElem {
public:
    RingElem(RingSpec spec, std::uint64_t value)
        : spec_(spec), value_(value % spec.modulus()) {}

    const RingSpec& spec() const { return spec_; }
    std::uint64_t value() const { return value_; }

    std::uint64_t residue() const { return value_ % spec_.p(); }
    bool is_unit() const { return residue() != 0; }
    bool is_zero() const { return value_ == 0; }

    friend bool operator==(const RingElem& a, const RingElem& b) {
        return a.spec_ == b.spec_ && a.value_ == b.value_;
    }
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

private:
    RingSpec spec_;
    std::uint64_t value_;
};

RingElem add(const RingElem& a, const RingElem& b);
RingElem sub(const RingElem& a, const RingElem& b);
RingElem mul(const RingElem& a, const RingElem& b);
RingElem neg(const RingElem& a);
RingElem inverse(const RingElem& a);

struct ValUnit {
    unsigned valuation;
    std::optional<RingElem> unit_part;  // none exactly when the input is 0
};
ValUnit val_unit(const RingElem& a);

// Smallest canonical unit whose residue avoids both 0 and `forbidden` (a residue
// class mod p). Requires p >= 3.
RingElem find_unit_avoiding(const RingSpec& spec, std::uint64_t forbidden);

}  // namespace baleq
