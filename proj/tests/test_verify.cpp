#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlnc/verify.hpp"

using namespace rlnc;

TEST_CASE("fast checks pass on a correct build") {
    CHECK(verify::check_shift_identities().pass);
    CHECK(verify::check_block_inverse_golden().pass);
    CHECK(verify::check_extra_receptions_table().pass);
    CHECK(verify::check_delay_dp_enumeration().pass);
    CHECK(verify::check_header_roundtrip(1).pass);
    CHECK(verify::check_wire_roundtrip(1).pass);
}

TEST_CASE("reports are deterministic bytes for a fixed seed") {
    auto a = verify::check_ring_det_oracle(7);
    auto b = verify::check_ring_det_oracle(7);
    CHECK(a.stats == b.stats);
    CHECK(a.pass == b.pass);
    std::vector<verify::CheckResult> ra{a}, rb{b};
    CHECK(verify::render_text(ra) == verify::render_text(rb));
    CHECK(verify::render_jsonl(ra) == verify::render_jsonl(rb));
}

TEST_CASE("jsonl escaping stays valid") {
    verify::CheckResult r;
    r.id = "quote\"and\\slash";
    r.detail = "line\nbreak";
    r.pass = false;
    r.stats = "tab\tand\x01" "zcontrol";
    std::vector<verify::CheckResult> v{r};
    std::string s = verify::render_jsonl(v);
    CHECK(s.find("\\\"") != std::string::npos);
    CHECK(s.find("\\n") != std::string::npos);
    CHECK(s.find("\\u0001") != std::string::npos);
    CHECK(s.find('\x01') == std::string::npos);
}

TEST_CASE("golden instance is sensitive to the weight-normalization rule") {
    // recompute the inverse blocks with the normalization map removed: the
    // pinned golden grid must no longer match, which is exactly what the
    // golden check would catch if the rule regressed
    ShiftParams p = ShiftParams::make(4);
    RingMatrix m(3, 3);
    m.at(0, 0) = 1;  m.at(0, 1) = 1;  m.at(0, 2) = 1;
    m.at(1, 0) = 2;  m.at(1, 1) = 4;  m.at(1, 2) = 8;
    m.at(2, 0) = 2;  m.at(2, 1) = 8;  m.at(2, 2) = 16;
    RingElem lam = ring_det(p, m);
    RingElem lam_inv = ring_pow(p, lam, 14);
    const RingElem golden[3][3] = {{0, 0b10100, 0b01010},
                                   {0b01010, 0b00010, 0b01000},
                                   {0b00101, 0b01000, 0b10010}};
    int mismatches = 0;
    int weight_violations = 0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            RingElem raw = ring_mul(p, lam_inv, ring_minor(p, m, c, r));  // no sigma
            if (raw != golden[r][c]) ++mismatches;
            if (2 * ring_weight(raw) > p.L && raw != p.full_mask()) ++weight_violations;
        }
    }
    CHECK(mismatches > 0);
    CHECK(weight_violations > 0);
}

TEST_CASE("random sessions are well formed") {
    for (auto kind : {SchemeKind::ConvGF, SchemeKind::Circ}) {
        SchemeConfig cfg{kind, 4, 9, 36, {1, 4}, false};
        if (kind == SchemeKind::ConvGF) cfg.p0 = {0, 1};
        std::vector<Packet> originals;
        auto in = verify::random_session(cfg, 0.7, 5, originals);
        CHECK(static_cast<int>(in.caught.size() + in.coded.size()) == 9);
        CHECK(in.caught.size() == in.caught_payloads.size());
        CHECK(std::is_sorted(in.caught.begin(), in.caught.end()));
        CHECK(originals.size() == 9);
    }
}
