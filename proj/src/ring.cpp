#include "baleq/ring.hpp"

namespace baleq {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

RingSpec::RingSpec(std::uint64_t p, unsigned k) : p_(p), k_(k) {
    if (!is_prime(p)) throw RingError("RingSpec: p must be prime, got " + std::to_string(p));
    if (k < 1) throw RingError("RingSpec: k must be >= 1");
    const std::uint64_t limit = std::uint64_t{1} << 62;
    std::uint64_t m = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (m > limit / p) throw RingError("RingSpec: p^k exceeds 2^62");
        m *= p;
    }
    modulus_ = m;
}

std::string RingSpec::designator() const {
    std::string s = "Z/" + std::to_string(p_);
    if (k_ > 1) s += "^" + std::to_string(k_);
    return s;
}

RingSpec RingSpec::parse(const std::string& designator) {
    if (designator.rfind("Z/", 0) != 0)
        throw RingError("bad ring designator: " + designator);
    std::string rest = designator.substr(2);
    auto caret = rest.find('^');
    std::uint64_t p;
    unsigned k = 1;
    try {
        if (caret == std::string::npos) {
            p = std::stoull(rest);
        } else {
            p = std::stoull(rest.substr(0, caret));
            k = static_cast<unsigned>(std::stoul(rest.substr(caret + 1)));
        }
    } catch (const std::exception&) {
        throw RingError("bad ring designator: " + designator);
    }
    return RingSpec(p, k);
}

RingElem add(const RingElem& a, const RingElem& b) {
    if (a.spec() != b.spec()) throw RingMismatch();
    const std::uint64_t m = a.spec().modulus();
    std::uint64_t s = a.value() + b.value();
    if (s >= m) s -= m;
    return RingElem(a.spec(), s);
}

RingElem sub(const RingElem& a, const RingElem& b) { return add(a, neg(b)); }

RingElem mul(const RingElem& a, const RingElem& b) {
    if (a.spec() != b.spec()) throw RingMismatch();
    return RingElem(a.spec(), mulmod(a.value(), b.value(), a.spec().modulus()));
}

RingElem neg(const RingElem& a) {
    const std::uint64_t m = a.spec().modulus();
    return RingElem(a.spec(), a.value() == 0 ? 0 : m - a.value());
}

RingElem inverse(const RingElem& a) {
    if (!a.is_unit()) throw NotAUnit();
    // extended Euclid on (value, modulus)
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(a.spec().modulus());
    std::int64_t newr = static_cast<std::int64_t>(a.value());
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt; newt = tmp;
        tmp = r - q * newr;
        r = newr; newr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(a.spec().modulus());
    return RingElem(a.spec(), static_cast<std::uint64_t>(t));
}

ValUnit val_unit(const RingElem& a) {
    if (a.is_zero()) return {a.spec().k(), std::nullopt};
    std::uint64_t v = a.value();
    unsigned val = 0;
    while (v % a.spec().p() == 0) {
        v /= a.spec().p();
        ++val;
    }
    return {val, RingElem(a.spec(), v)};
}

RingElem find_unit_avoiding(const RingSpec& spec, std::uint64_t forbidden) {
    if (spec.p() < 3) throw ResidueFieldTooSmall();
    forbidden %= spec.p();
    for (std::uint64_t v = 1; v < spec.modulus(); ++v) {
        std::uint64_t r = v % spec.p();
        if (r != 0 && r != forbidden) return RingElem(spec, v);
    }
    throw RingError("find_unit_avoiding: no unit found");  // unreachable for p >= 3
}

}  // namespace baleq
