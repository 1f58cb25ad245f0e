#include "rlnc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <thread>

#include "rlnc/linalg.hpp"

namespace rlnc {

namespace {

// stream keys, fixed forever: changing any of these breaks every golden file
enum StreamKey : uint64_t {
    kChannel = 1,
    kErasure = 2,
    kSender = 3,
    kPayload = 4,
};

struct Engine {
    ExperimentSpec spec;
    std::unique_ptr<FieldCtx> field;    // ConvGF arithmetic, or the order-(L+1) embedding for circ
    std::unique_ptr<ShiftParams> shift;

    explicit Engine(const ExperimentSpec& s) : spec(s) {
        spec.scheme.validate();
        if (spec.R < 1) throw InvalidArgs("experiment: R must be positive");
        if (spec.trials < 1) throw InvalidArgs("experiment: trials must be positive");
        if (spec.independent_receivers && spec.decode_payloads)
            throw InvalidArgs("experiment: independent-receiver mode carries no payloads");
        switch (spec.scheme.kind) {
            case SchemeKind::ConvGF:
                field = std::make_unique<FieldCtx>(FieldCtx::make(spec.scheme.L));
                break;
            case SchemeKind::Circ:
            case SchemeKind::CircRed:
                shift = std::make_unique<ShiftParams>(ShiftParams::make(spec.scheme.L));
                field = std::make_unique<FieldCtx>(FieldCtx::make(spec.scheme.L));
                break;
            case SchemeKind::Perfect:
                break;
        }
    }
};

struct ReceiverState {
    std::unique_ptr<GfqRankTracker> tracker;  // ConvGF and circ (via field embedding)
    int perfect_count = 0;
    int rank = 0;
    int U_r = 0, N_r = 0, D_r = -1;
    std::vector<int> caught;
    std::vector<Packet> caught_payloads;
    std::vector<CodedPacket> coded;  // innovative coded packets (headers always, payloads if decoding)
    bool done = false;
};

bool absorb_reception(const Engine& eng, ReceiverState& rs, const std::vector<uint32_t>* gamma,
                      const std::vector<Coeff>* shifts, int sys_index) {
    const int P = eng.spec.scheme.P;
    switch (eng.spec.scheme.kind) {
        case SchemeKind::Perfect:
            if (rs.perfect_count < P) {
                ++rs.perfect_count;
                return true;
            }
            return false;
        case SchemeKind::ConvGF: {
            std::vector<uint32_t> v;
            if (gamma) {
                v = *gamma;
            } else {
                v.assign(static_cast<size_t>(P), 0);
                v[static_cast<size_t>(sys_index)] = 1;
            }
            return rs.tracker->absorb(std::move(v));
        }
        case SchemeKind::Circ:
        case SchemeKind::CircRed: {
            std::vector<uint32_t> v;
            if (shifts) {
                v = coeff_to_field_column(*eng.shift, *eng.field, *shifts);
            } else {
                v.assign(static_cast<size_t>(P), 0);
                v[static_cast<size_t>(sys_index)] = 1;
            }
            return rs.tracker->absorb(std::move(v));
        }
    }
    return false;
}

TrialResult run_trial_impl(const Engine& eng, long trial_index) {
    const ExperimentSpec& spec = eng.spec;
    const SchemeConfig& cfg = spec.scheme;
    const int P = cfg.P, R = spec.R;

    TrialResult out;
    out.base_seed = spec.base_seed;
    out.trial_index = trial_index;
    uint64_t channel_seed =
        spec.channel.fixed_per_experiment
            ? derive_seed(spec.base_seed, {kChannel, 0})
            : derive_seed(spec.base_seed, {kChannel, static_cast<uint64_t>(trial_index)});
    out.channel = draw_channel(spec.channel, R, channel_seed);

    SplitMix64 sender(derive_seed(spec.base_seed, {kSender, static_cast<uint64_t>(trial_index)}));
    std::vector<SplitMix64> erasure, own_sender;
    erasure.reserve(static_cast<size_t>(R));
    for (int r = 0; r < R; ++r)
        erasure.emplace_back(derive_seed(
            spec.base_seed, {kErasure, static_cast<uint64_t>(trial_index), static_cast<uint64_t>(r)}));
    if (spec.independent_receivers)
        for (int r = 0; r < R; ++r)
            own_sender.emplace_back(derive_seed(spec.base_seed, {kSender, static_cast<uint64_t>(trial_index),
                                                                 static_cast<uint64_t>(r)}));

    // payloads exist only when decoding is requested; they draw from their
    // own stream so toggling them never disturbs delay statistics
    std::vector<Packet> originals;
    std::vector<CodedPacket> systematic;
    if (spec.decode_payloads && cfg.kind != SchemeKind::Perfect) {
        SplitMix64 payload(derive_seed(spec.base_seed, {kPayload, static_cast<uint64_t>(trial_index)}));
        originals.reserve(static_cast<size_t>(P));
        for (int j = 0; j < P; ++j) originals.push_back(random_packet(cfg.L, cfg.symbols(), payload));
        systematic = encode_systematic(cfg, originals);
    }

    std::vector<ReceiverState> recv(static_cast<size_t>(R));
    for (auto& rs : recv)
        if (cfg.kind != SchemeKind::Perfect)
            rs.tracker = std::make_unique<GfqRankTracker>(*eng.field, P);

    // phase one: the P originals go out uncoded
    for (int j = 0; j < P; ++j) {
        for (int r = 0; r < R; ++r) {
            auto& rs = recv[static_cast<size_t>(r)];
            if (!erasure[static_cast<size_t>(r)].bernoulli(out.channel[static_cast<size_t>(r)]))
                continue;
            ++rs.N_r;
            ++rs.U_r;
            bool innovative = absorb_reception(eng, rs, nullptr, nullptr, j);
            if (innovative) ++rs.rank;
            rs.caught.push_back(j);
            if (spec.decode_payloads && cfg.kind != SchemeKind::Perfect)
                rs.caught_payloads.push_back(systematic[static_cast<size_t>(j)].payload);
        }
    }
    int unfinished = 0;
    for (auto& rs : recv) {
        rs.rank = cfg.kind == SchemeKind::Perfect ? rs.perfect_count : rs.rank;
        if (rs.rank >= P) {
            rs.done = true;
            rs.D_r = 0;
        } else {
            ++unfinished;
        }
    }

    // phase two: coded packets until every receiver reaches full rank
    long d = 0;
    const long cap = 2000000L + 4096L * P;
    while (unfinished > 0) {
        ++d;
        if (d > cap) throw NonConvergence("simulation: phase two exceeded the transmission cap");
        std::vector<uint32_t> gamma;
        std::vector<Coeff> shifts;
        CodedPacket pkt;
        bool have_payload = false;
        if (!spec.independent_receivers) {
            if (cfg.kind == SchemeKind::ConvGF) {
                gamma = draw_conv_header(cfg, sender);
            } else if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed) {
                shifts = draw_circ_header(cfg, sender);
            }
        }
        if (spec.decode_payloads && cfg.kind != SchemeKind::Perfect) {
            if (cfg.kind == SchemeKind::ConvGF) {
                pkt.gamma = gamma;
                pkt.payload = combine_conv(cfg, *eng.field, gamma, originals);
            } else {
                pkt.shifts = shifts;
                pkt.payload = combine_circ(cfg, *eng.shift, shifts, originals);
            }
            pkt.has_payload = true;
            have_payload = true;
        }

        for (int r = 0; r < R; ++r) {
            auto& rs = recv[static_cast<size_t>(r)];
            if (rs.done) continue;
            std::vector<uint32_t> own_gamma;
            std::vector<Coeff> own_shifts;
            if (spec.independent_receivers) {
                auto& src = own_sender[static_cast<size_t>(r)];
                if (cfg.kind == SchemeKind::ConvGF)
                    own_gamma = draw_conv_header(cfg, src);
                else if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed)
                    own_shifts = draw_circ_header(cfg, src);
            }
            if (!erasure[static_cast<size_t>(r)].bernoulli(out.channel[static_cast<size_t>(r)]))
                continue;
            ++rs.N_r;
            const auto* gp = spec.independent_receivers ? (own_gamma.empty() ? nullptr : &own_gamma)
                                                        : (gamma.empty() ? nullptr : &gamma);
            const auto* sp = spec.independent_receivers
                                 ? (own_shifts.empty() ? nullptr : &own_shifts)
                                 : (shifts.empty() ? nullptr : &shifts);
            bool innovative = absorb_reception(eng, rs, gp, sp, -1);
            if (innovative) {
                ++rs.rank;
                if (cfg.kind != SchemeKind::Perfect) {
                    CodedPacket kept;
                    kept.gamma = gp ? *gp : std::vector<uint32_t>{};
                    kept.shifts = sp ? *sp : std::vector<Coeff>{};
                    if (have_payload) {
                        kept.payload = pkt.payload;
                        kept.has_payload = true;
                    }
                    rs.coded.push_back(std::move(kept));
                }
            }
            if (rs.rank >= P) {
                rs.done = true;
                rs.D_r = static_cast<int>(d);
                --unfinished;
            }
        }
    }

    out.D = 0;
    out.recv.resize(static_cast<size_t>(R));
    for (int r = 0; r < R; ++r) {
        auto& rs = recv[static_cast<size_t>(r)];
        auto& rt = out.recv[static_cast<size_t>(r)];
        rt.D_r = rs.D_r;
        rt.U_r = rs.U_r;
        rt.N_r = rs.N_r;
        out.D = std::max(out.D, static_cast<long>(rs.D_r));

        if (cfg.kind == SchemeKind::Perfect) continue;

        if (spec.decode_payloads) {
            DecodeInput in;
            in.cfg = cfg;
            in.caught = rs.caught;
            in.caught_payloads = rs.caught_payloads;
            in.coded = rs.coded;
            DecodeStats st;
            std::vector<Packet> decoded;
            switch (cfg.kind) {
                case SchemeKind::ConvGF: decoded = decode_conv(*eng.field, in, st); break;
                case SchemeKind::Circ: decoded = decode_circ(*eng.shift, in, st); break;
                case SchemeKind::CircRed: decoded = decode_circ_red(*eng.shift, in, st); break;
                default: break;
            }
            for (int j = 0; j < P; ++j)
                if (!(decoded[static_cast<size_t>(j)] == originals[static_cast<size_t>(j)]))
                    throw DecodeAssertion("simulation: decoded packet differs from the original");
            rt.ops = st.counted.binary_ops;
            rt.absA = st.residual_A;
        } else {
            // structure-only pass for |A| from the headers alone
            const auto& coded = rs.coded;
            auto nonzero = [&](int row, int col) {
                const auto& cp = coded[static_cast<size_t>(row)];
                return cfg.kind == SchemeKind::ConvGF
                           ? cp.gamma[static_cast<size_t>(col)] != 0
                           : !cp.shifts[static_cast<size_t>(col)].is_zero();
            };
            rt.absA = residual_after_singletons(P, rs.caught, nonzero,
                                                static_cast<int>(coded.size()));
        }
    }
    return out;
}

}  // namespace

ChannelRule ChannelRule::from_list(std::vector<double> p) {
    ChannelRule c;
    c.kind = Kind::List;
    c.list = std::move(p);
    return c;
}

ChannelRule ChannelRule::from_range(double lo, double hi, bool fixed) {
    ChannelRule c;
    c.kind = Kind::Range;
    c.lo = lo;
    c.hi = hi;
    c.fixed_per_experiment = fixed;
    return c;
}

std::vector<double> draw_channel(const ChannelRule& rule, int R, uint64_t seed) {
    std::vector<double> p(static_cast<size_t>(R));
    if (rule.kind == ChannelRule::Kind::List) {
        if (rule.list.size() == 1) {
            std::fill(p.begin(), p.end(), rule.list[0]);
        } else if (static_cast<int>(rule.list.size()) == R) {
            p = rule.list;
        } else {
            throw InvalidArgs("channel: p list must have length 1 or R");
        }
    } else {
        SplitMix64 rng(seed);
        for (auto& v : p) v = rng.in_range(rule.lo, rule.hi);
    }
    for (double v : p)
        if (!(v > 0.0 && v <= 1.0)) throw InvalidArgs("channel: p_r must be in (0, 1]");
    return p;
}

TrialResult run_trial(const ExperimentSpec& spec, long trial_index) {
    Engine eng(spec);
    return run_trial_impl(eng, trial_index);
}

namespace {

struct Accum {
    long trials = 0;
    unsigned long long sum_D = 0;
    unsigned __int128 sum_D2 = 0;
    unsigned long long sum_U = 0, sum_N = 0, sum_A = 0, sum_ops = 0;
    long recv_count = 0;

    void take(const TrialResult& tr) {
        ++trials;
        sum_D += static_cast<unsigned long long>(tr.D);
        sum_D2 += static_cast<unsigned __int128>(tr.D) * static_cast<unsigned __int128>(tr.D);
        for (const auto& r : tr.recv) {
            sum_U += static_cast<unsigned long long>(r.U_r);
            sum_N += static_cast<unsigned long long>(r.N_r);
            sum_A += static_cast<unsigned long long>(r.absA);
            sum_ops += r.ops;
            ++recv_count;
        }
    }

    void merge(const Accum& o) {
        trials += o.trials;
        sum_D += o.sum_D;
        sum_D2 += o.sum_D2;
        sum_U += o.sum_U;
        sum_N += o.sum_N;
        sum_A += o.sum_A;
        sum_ops += o.sum_ops;
        recv_count += o.recv_count;
    }
};

// Workers own disjoint trial-index slices; per-trial randomness depends only
// on the trial index and every reduction below is exact integer arithmetic,
// so the thread count can never change a result.
template <typename PerTrial>
void run_sliced(const ExperimentSpec& spec, PerTrial&& per_trial) {
    int threads = std::max(spec.threads, 1);
    threads = static_cast<int>(std::min<long>(threads, spec.trials));
    if (threads <= 1) {
        Engine eng(spec);
        for (long t = 0; t < spec.trials; ++t) per_trial(t, run_trial_impl(eng, t));
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            Engine local(spec);
            for (long t = w; t < spec.trials; t += threads) per_trial(t, run_trial_impl(local, t));
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ExperimentStats run_experiment(const ExperimentSpec& spec) {
    int threads = std::max(spec.threads, 1);
    std::vector<Accum> partial(static_cast<size_t>(std::max<long>(
        std::min<long>(threads, spec.trials), 1)));
    run_sliced(spec, [&](long t, const TrialResult& tr) {
        partial[static_cast<size_t>(t % partial.size())].take(tr);
    });
    Accum a;
    for (const auto& p : partial) a.merge(p);

    ExperimentStats st;
    st.trials = a.trials;
    double n = static_cast<double>(a.trials);
    st.mean_D = static_cast<double>(a.sum_D) / n;
    st.mean_D_per_P = st.mean_D / spec.scheme.P;
    if (a.trials > 1) {
        double var = (static_cast<double>(a.sum_D2) -
                      static_cast<double>(a.sum_D) * static_cast<double>(a.sum_D) / n) /
                     (n - 1.0);
        st.ci95_D = 1.96 * std::sqrt(std::max(var, 0.0) / n);
    }
    double rc = static_cast<double>(a.recv_count);
    st.mean_ops = static_cast<double>(a.sum_ops) / rc;
    st.mean_ops_per_bit =
        st.mean_ops / (static_cast<double>(spec.scheme.P) * static_cast<double>(spec.scheme.M));
    st.mean_Ur = static_cast<double>(a.sum_U) / rc;
    st.mean_absA = static_cast<double>(a.sum_A) / rc;
    st.mean_Nr = static_cast<double>(a.sum_N) / rc;
    return st;
}

std::vector<long> run_delays(const ExperimentSpec& spec) {
    std::vector<long> out(static_cast<size_t>(spec.trials), 0);
    run_sliced(spec, [&](long t, const TrialResult& tr) { out[static_cast<size_t>(t)] = tr.D; });
    return out;
}

}  // namespace rlnc
