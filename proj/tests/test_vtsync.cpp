#include "doctest.h"

#include "codedsync/rng.hpp"
#include "codedsync/simnet.hpp"
#include "codedsync/vtsync.hpp"

using namespace codedsync;

namespace {

std::vector<std::uint64_t> delete_at(const std::vector<std::uint64_t>& x, std::size_t i) {
    std::vector<std::uint64_t> out(x);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

}  // namespace

TEST_CASE("syndrome worked values") {
    Field f5 = make_field(5);
    std::vector<std::uint64_t> zeros = {0, 0, 0, 0};
    VtSyndrome s = vt_syndrome(f5, zeros);
    CHECK(s.nu1 == 0);
    CHECK(s.nu2 == 2);  // (1+2+3) mod 4

    std::vector<std::uint64_t> ramp = {1, 2, 3, 4, 4};
    VtSyndrome r = vt_syndrome(f5, ramp);
    CHECK(r.nu1 == 4);
    CHECK(r.nu2 == 0);

    std::vector<std::uint64_t> down = {4, 3, 2, 1};
    CHECK(vt_syndrome(f5, down).nu2 == 0);

    CHECK_THROWS_AS(vt_syndrome(f5, std::vector<std::uint64_t>{}), LengthMismatch);
}

TEST_CASE("recovery of the worked deletion") {
    Field f5 = make_field(5);
    std::vector<std::uint64_t> x = {1, 2, 3, 4, 4};
    VtSyndrome s = vt_syndrome(f5, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto rec = vt_recover(f5, delete_at(x, i), s, x.size());
        CHECK(rec.recovered == x);
    }
}

TEST_CASE("deleting from a constant run recovers the run") {
    Field f = make_field(7);
    std::vector<std::uint64_t> x = {3, 3, 3, 3, 3, 3};
    VtSyndrome s = vt_syndrome(f, x);
    auto rec = vt_recover(f, delete_at(x, 2), s, x.size());
    CHECK(rec.recovered == x);
    CHECK(rec.symbol == 3);
}

TEST_CASE("corrupt syndromes are rejected") {
    Field f3 = make_field(3);
    std::vector<std::uint64_t> shortened = {0};
    // (0,0) has syndrome (0,1); claim (0,0) instead
    CHECK_THROWS_AS(vt_recover(f3, shortened, VtSyndrome{0, 0}, 2), NoCandidate);
    std::vector<std::uint64_t> wrong = {0, 1};
    CHECK_THROWS_AS(vt_recover(f3, wrong, VtSyndrome{0, 0}, 2), LengthMismatch);
}

TEST_CASE("exhaustive single-deletion recovery at desk scale") {
    for (std::uint64_t q : {2ull, 3ull}) {
        Field f = make_field(q);
        for (std::size_t l = 2; l <= 5; ++l) {
            std::size_t count = 1;
            for (std::size_t i = 0; i < l; ++i) count *= q;
            for (std::size_t word = 0; word < count; ++word) {
                std::vector<std::uint64_t> x(l);
                std::size_t w = word;
                for (std::size_t i = 0; i < l; ++i) {
                    x[i] = w % q;
                    w /= q;
                }
                VtSyndrome s = vt_syndrome(f, x);
                for (std::size_t i = 0; i < l; ++i) {
                    auto rec = vt_recover(f, delete_at(x, i), s, l);
                    REQUIRE(rec.recovered == x);
                }
            }
        }
    }
}

TEST_CASE("randomized recovery at q = 5 up to length 64") {
    Field f = make_field(5);
    Rng rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t l = 2 + rng.below(63);
        std::vector<std::uint64_t> x(l);
        for (auto& v : x) v = rng.below(5);
        VtSyndrome s = vt_syndrome(f, x);
        std::size_t i = rng.below(l);
        auto rec = vt_recover(f, delete_at(x, i), s, l);
        CHECK(rec.recovered == x);
    }
}

TEST_CASE("coded shares over the single parity code") {
    CodeSpec code = CodeSpec::single_parity(2, 5);
    const Field& f = code.field();
    std::vector<std::uint64_t> x0 = {1, 2, 3, 4, 4}, x1 = {1, 1, 1, 1, 1};
    std::vector<VtSyndrome> syn = {vt_syndrome(f, x0), vt_syndrome(f, x1)};
    SyndromeShares shares = encode_syndrome_shares(code, 5, syn);
    REQUIRE(shares.nu1_shares.size() == 1);
    CHECK(shares.nu1_shares[0] == f.add(syn[0].nu1, syn[1].nu1));
    CHECK(shares.nu2_shares[0] == f.add(syn[0].nu2, syn[1].nu2));

    // user 0 is affected: fetch user 1's syndrome and the parity share
    auto values = collect_syndrome_values(code, {true, false}, syn, shares);
    VtSyndrome got = recover_own_syndrome(code, 0, values);
    CHECK(got == syn[0]);

    // all-zero blocks make all-zero shares
    std::vector<std::uint64_t> z(5, 0);
    std::vector<VtSyndrome> zsyn = {vt_syndrome(f, z), vt_syndrome(f, z)};
    SyndromeShares zs = encode_syndrome_shares(code, 5, zsyn);
    CHECK(zs.nu1_shares[0] == 0);
    // nu2 of the zero block is 2+... = (1+2+3+4) mod 5 = 0
    CHECK(zs.nu2_shares[0] == 0);
}

TEST_CASE("larger share systems and subset independence") {
    CodeSpec code = CodeSpec::rs_systematic(5, 3, 5);
    const Field& f = code.field();
    Rng rng(17);
    std::vector<std::vector<std::uint64_t>> blocks(3, std::vector<std::uint64_t>(5));
    for (auto& b : blocks)
        for (auto& v : b) v = rng.below(5);
    std::vector<VtSyndrome> syn;
    for (const auto& b : blocks) syn.push_back(vt_syndrome(f, b));
    SyndromeShares shares = encode_syndrome_shares(code, 5, syn);

    // user 0 recovers from one unaffected user plus both shares
    auto values = collect_syndrome_values(code, {true, true, false}, syn, shares);
    CHECK(values.size() == 3);
    CHECK(recover_own_syndrome(code, 0, values) == syn[0]);
    CHECK(recover_own_syndrome(code, 1, values) == syn[1]);

    // any k node values give the same answer
    std::vector<SyndromeValue> all;
    for (std::size_t s = 0; s < 3; ++s) all.push_back({s, syn[s].nu1, syn[s].nu2});
    for (std::size_t t = 3; t < 5; ++t)
        all.push_back({t, shares.nu1_shares[t - 3], shares.nu2_shares[t - 3]});
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            for (std::size_t c = b + 1; c < all.size(); ++c) {
                std::vector<SyndromeValue> pick = {all[a], all[b], all[c]};
                CHECK(recover_own_syndrome(code, 2, pick) == syn[2]);
            }
}

TEST_CASE("share-mode guards") {
    CodeSpec code = CodeSpec::single_parity(2, 5);
    std::vector<VtSyndrome> syn = {{1, 2}, {3, 4}};
    CHECK_THROWS_AS(encode_syndrome_shares(code, 4, syn), FieldTooSmall);
    SyndromeShares shares = encode_syndrome_shares(code, 5, syn);
    CHECK_THROWS_AS(collect_syndrome_values(code, {true, true}, syn, shares), TooManyAffected);
    CHECK_THROWS_AS(recover_own_syndrome(code, 0, {}), BadSubsetSize);
    // wide parity: n - k >= k never pays off
    CHECK_THROWS_AS(encode_syndrome_shares(CodeSpec::rs_systematic(5, 2, 5), 5,
                                           std::vector<VtSyndrome>{{0, 0}, {0, 0}}),
                    FieldTooSmall);
}

TEST_CASE("share storage stays cheaper than storing every syndrome") {
    for (std::uint64_t q : {5ull, 7ull, 11ull, 13ull}) {
        std::size_t l = q;
        for (std::size_t k = 2; k <= 6; ++k) {
            for (std::size_t r = 1; r < k; ++r) {  // r = n - k parity nodes
                std::uint64_t share_bits = 2 * r * ceil_log2(q);
                std::uint64_t direct_bits = k * (ceil_log2(q) + ceil_log2(l));
                CHECK(share_bits < direct_bits);
            }
        }
    }
}

TEST_CASE("unknown deletion end to end: recover the value then synchronize") {
    // q = l = 5 so the coded-share mode applies.
    BuildParams p{SchemeId::V, 3, 2, 5, 5, 0};
    Rng rng(88);
    auto blocks = std::vector<std::vector<std::uint64_t>>{{2, 0, 4, 1, 3}, {1, 1, 2, 4, 0}};
    SystemState st = build_system_with_blocks(p, blocks);
    const Field& f = st.sync.code.field();

    std::vector<VtSyndrome> syn = {vt_syndrome(f, blocks[0]), vt_syndrome(f, blocks[1])};
    SyndromeShares shares = encode_syndrome_shares(st.sync.code, 5, syn);

    // user 0 loses a symbol at an unknown position
    std::size_t secret_pos = 3;
    auto shortened = delete_at(blocks[0], secret_pos);
    auto values = collect_syndrome_values(st.sync.code, {true, false}, syn, shares);
    VtSyndrome own = recover_own_syndrome(st.sync.code, 0, values);
    CHECK(own == syn[0]);
    auto rec = vt_recover(f, shortened, own, 5);
    CHECK(rec.recovered == blocks[0]);

    // the recovered (position, value) pair drives a normal deletion round;
    // user 1 deletes a known symbol alongside
    scheme_v_round(st.sync, {Deletion{rec.pos, rec.symbol}, Deletion{1, blocks[1][1]}});
    Rng vr(1);
    CHECK(check_consistency(st, 64, VerifyLevel::Full, vr));
}
