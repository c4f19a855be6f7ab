#include "codedsync/vtsync.hpp"

#include <algorithm>

namespace codedsync {

VtSyndrome vt_syndrome(const Field& f, std::span<const std::uint64_t> x) {
    if (x.empty()) throw LengthMismatch("syndrome of an empty string");
    VtSyndrome s;
    for (std::uint64_t v : x) s.nu1 = f.add(s.nu1, v % f.order());
    std::size_t acc = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] % f.order() <= x[i + 1] % f.order()) acc += i + 1;
    s.nu2 = acc % x.size();
    return s;
}

VtRecovery vt_recover(const Field& f, std::span<const std::uint64_t> shortened,
                      const VtSyndrome& syndrome, std::size_t ell) {
    if (shortened.size() + 1 != ell) throw LengthMismatch("shortened string must have length l-1");
    // The symbol sum fixes the missing value; only the position is searched.
    std::uint64_t have = 0;
    for (std::uint64_t v : shortened) have = f.add(have, v % f.order());
    std::uint64_t missing = f.sub(syndrome.nu1, have);

    std::vector<std::uint64_t> candidate(ell);
    bool found = false;
    VtRecovery out;
    for (std::size_t pos = 0; pos < ell; ++pos) {
        candidate.assign(shortened.begin(), shortened.end());
        candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos), missing);
        if (vt_syndrome(f, candidate) == syndrome) {
            if (found && candidate != out.recovered)
                throw AmbiguousRecovery("distinct strings share the syndrome");
            if (!found) {
                out.recovered = candidate;
                out.pos = pos;
                out.symbol = missing;
                found = true;
            }
        }
    }
    if (!found) throw NoCandidate("no reinsertion matches the syndrome");
    return out;
}

SyndromeShares encode_syndrome_shares(const CodeSpec& code, std::size_t ell,
                                      const std::vector<VtSyndrome>& syndromes) {
    const Field& f = code.field();
    if (ell != f.order())
        throw FieldTooSmall("coded syndrome shares require l = q");
    if (code.n() - code.k() >= code.k())
        throw FieldTooSmall("coded shares only pay off when n-k < k");
    if (syndromes.size() != code.k()) throw LengthMismatch("expected one syndrome per user");
    SyndromeShares out;
    const Matrix& g = code.generator();
    for (std::size_t t = code.k(); t < code.n(); ++t) {
        std::uint64_t s1 = 0, s2 = 0;
        for (std::size_t s = 0; s < code.k(); ++s) {
            s1 = f.add(s1, f.mul(g.at(s, t), syndromes[s].nu1));
            s2 = f.add(s2, f.mul(g.at(s, t), syndromes[s].nu2 % f.order()));
        }
        out.nu1_shares.push_back(s1);
        out.nu2_shares.push_back(s2);
    }
    return out;
}

VtSyndrome recover_own_syndrome(const CodeSpec& code, std::size_t user,
                                const std::vector<SyndromeValue>& values) {
    if (values.size() != code.k()) throw BadSubsetSize("need exactly k per-node values");
    if (user >= code.k()) throw IndexOutOfRange("user index out of range");
    const Field& f = code.field();
    // The per-node values are coordinates of two MDS codewords (one per
    // syndrome family); decode both and read off the user's entry.
    Matrix sys(f, code.k(), code.k());
    for (std::size_t r = 0; r < values.size(); ++r) {
        if (values[r].node >= code.n()) throw IndexOutOfRange("node index out of range");
        for (std::size_t s = 0; s < code.k(); ++s)
            sys.set(r, s, code.generator().at(s, values[r].node));
    }
    Matrix dec = sys.inverse();
    std::uint64_t nu1 = 0, nu2 = 0;
    for (std::size_t r = 0; r < values.size(); ++r) {
        nu1 = f.add(nu1, f.mul(dec.at(user, r), values[r].nu1 % f.order()));
        nu2 = f.add(nu2, f.mul(dec.at(user, r), values[r].nu2 % f.order()));
    }
    return {nu1, static_cast<std::size_t>(nu2)};
}

std::vector<SyndromeValue> collect_syndrome_values(const CodeSpec& code,
                                                   const std::vector<bool>& affected,
                                                   const std::vector<VtSyndrome>& syndromes,
                                                   const SyndromeShares& shares) {
    if (affected.size() != code.k() || syndromes.size() != code.k())
        throw LengthMismatch("expected one flag and one syndrome per user");
    std::size_t count = static_cast<std::size_t>(std::count(affected.begin(), affected.end(), true));
    if (count > code.n() - code.k())
        throw TooManyAffected("more affected users than parity checks");
    std::vector<SyndromeValue> values;
    for (std::size_t s = 0; s < code.k() && values.size() < code.k(); ++s)
        if (!affected[s])
            values.push_back({s, syndromes[s].nu1, syndromes[s].nu2 % code.field().order()});
    for (std::size_t t = code.k(); t < code.n() && values.size() < code.k(); ++t)
        values.push_back({t, shares.nu1_shares[t - code.k()], shares.nu2_shares[t - code.k()]});
    return values;
}

}  // namespace codedsync
