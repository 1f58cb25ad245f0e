// Command-line front end: seeded simulation sweeps, closed-form evaluation,
// and the verification suite, all emitting stable CSV/text for plotting.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rlnc/analysis.hpp"
#include "rlnc/sim.hpp"
#include "rlnc/textfmt.hpp"
#include "rlnc/verify.hpp"

namespace {

using namespace rlnc;

int default_threads() {
    if (const char* env = std::getenv("RLNC_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 16u));
}

Rational parse_p0(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos)
        throw CLI::ValidationError("--p0", "p0 must be an exact rational N/D (e.g. 1/4)");
    try {
        unsigned long num = std::stoul(s.substr(0, slash));
        unsigned long den = std::stoul(s.substr(slash + 1));
        return Rational{static_cast<uint32_t>(num), static_cast<uint32_t>(den)};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--p0", "p0 must be an exact rational N/D");
    }
}

SchemeKind parse_scheme(const std::string& s, int& L) {
    if (s == "gf2") {
        L = 1;
        return SchemeKind::ConvGF;
    }
    if (s == "gf") return SchemeKind::ConvGF;
    if (s == "perfect") return SchemeKind::Perfect;
    if (s == "circ") return SchemeKind::Circ;
    if (s == "circ-red") return SchemeKind::CircRed;
    throw CLI::ValidationError("--scheme", "expected one of gf2|gf|perfect|circ|circ-red");
}

struct CommonArgs {
    std::string scheme = "circ";
    int L = 4;
    std::string p0 = "1/4";
    int P = 15;
    int M = 1024;
    int R = 60;
    long trials = 10000;
    uint64_t seed = 1;
    std::vector<double> p_list;
    std::string p_range;
    bool channel_fixed = false;
    std::string decode = "off";
    bool independent = false;
    std::string out;
    int threads = 0;
};

void add_channel_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--p-list", a.p_list,
                    "per-receiver success probabilities (one value broadcasts to all R)");
    cmd->add_option("--p-range", a.p_range,
                    "uniform success-probability range lo:hi, redrawn per trial");
    cmd->add_flag("--channel-fixed", a.channel_fixed,
                  "draw the ranged channel once per experiment instead of per trial");
}

ChannelRule make_channel(const CommonArgs& a) {
    if (!a.p_list.empty() && !a.p_range.empty())
        throw CLI::ValidationError("--p-list", "give either --p-list or --p-range, not both");
    if (!a.p_list.empty()) return ChannelRule::from_list(a.p_list);
    double lo = 0.8, hi = 0.9;
    if (!a.p_range.empty()) {
        size_t colon = a.p_range.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--p-range", "expected lo:hi");
        lo = std::stod(a.p_range.substr(0, colon));
        hi = std::stod(a.p_range.substr(colon + 1));
    }
    return ChannelRule::from_range(lo, hi, a.channel_fixed);
}

double nominal_mean_p(const ChannelRule& rule) {
    if (rule.kind == ChannelRule::Kind::List) {
        double s = 0;
        for (double v : rule.list) s += v;
        return s / static_cast<double>(rule.list.size());
    }
    return 0.5 * (rule.lo + rule.hi);
}

SchemeConfig make_scheme(const CommonArgs& a, std::ostream& log) {
    int L = a.L;
    SchemeKind kind = parse_scheme(a.scheme, L);
    SchemeConfig cfg;
    cfg.kind = kind;
    cfg.L = kind == SchemeKind::Perfect ? 1 : L;
    cfg.P = a.P;
    cfg.M = a.M;
    if (kind == SchemeKind::Circ || kind == SchemeKind::CircRed) {
        if (!is_admissible_L(L)) {
            auto valid = admissible_L_values(6);
            std::string list;
            for (int v : valid) list += (list.empty() ? "" : ",") + std::to_string(v);
            throw CLI::ValidationError(
                "--L", "circular-shift schemes need L even with L+1 prime and 2 a primitive root; "
                       "valid values: {" + list + ",...}");
        }
        cfg.p0 = parse_p0(a.p0);
    }
    int lanes = cfg.L;
    if (cfg.M % lanes != 0) {
        int padded = ((cfg.M + lanes - 1) / lanes) * lanes;
        log << "note: payload padded from " << cfg.M << " to " << padded
            << " bits so the symbol length divides it (" << (padded - cfg.M) << " pad bits)\n";
        cfg.M = padded;
    }
    cfg.validate();
    return cfg;
}

std::string p0_column(const SchemeConfig& cfg) {
    if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed) return cfg.p0.str();
    return "";
}

std::string scheme_column(const SchemeConfig& cfg) {
    if (cfg.kind == SchemeKind::ConvGF && cfg.L == 1) return "gf2";
    return scheme_name(cfg.kind);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

// ---- simulate ----

std::string simulate_csv_row(const SchemeConfig& cfg, const CommonArgs& a,
                             const ExperimentStats& st) {
    std::ostringstream os;
    os << scheme_column(cfg) << "," << (cfg.kind == SchemeKind::Perfect ? "" : std::to_string(cfg.L))
       << "," << p0_column(cfg) << "," << cfg.P << "," << cfg.M << "," << a.R << "," << st.trials
       << "," << a.seed << "," << fmt_double(st.mean_D) << "," << fmt_double(st.mean_D_per_P) << ","
       << fmt_double(st.ci95_D) << "," << fmt_double(st.mean_ops) << ","
       << fmt_double(st.mean_ops_per_bit) << "," << fmt_double(st.mean_Ur) << ","
       << fmt_double(st.mean_absA) << "\n";
    return os.str();
}

int cmd_simulate(const CommonArgs& a) {
    SchemeConfig cfg = make_scheme(a, std::cerr);
    ExperimentSpec spec;
    spec.scheme = cfg;
    spec.channel = make_channel(a);
    spec.R = a.R;
    spec.trials = a.trials;
    spec.base_seed = a.seed;
    spec.decode_payloads = a.decode == "on";
    spec.independent_receivers = a.independent;
    if (spec.decode_payloads && cfg.kind == SchemeKind::Perfect) {
        std::cerr << "note: the perfect scheme is header-only; --decode on has no effect\n";
        spec.decode_payloads = false;
    }
    spec.threads = a.threads > 0 ? a.threads : default_threads();
    auto st = run_experiment(spec);
    std::string csv =
        "scheme,L,p0,P,M,R,trials,seed,mean_D,mean_D_per_P,ci95_D,mean_ops,mean_ops_per_bit,"
        "mean_Ur,mean_absA\n" +
        simulate_csv_row(cfg, a, st);
    write_output(a.out, csv);
    return 0;
}

// ---- analyze ----

struct AnalyzeArgs : CommonArgs {
    std::string what = "delay";
    double mean_ur = -1;
    double mean_absa = -1;
    std::string means_from;
};

void load_means(AnalyzeArgs& a) {
    if (a.means_from.empty()) return;
    std::ifstream f(a.means_from);
    if (!f) throw std::runtime_error("cannot read means CSV: " + a.means_from);
    std::string header, row;
    if (!std::getline(f, header) || !std::getline(f, row))
        throw std::runtime_error("means CSV needs a header and one data row");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    auto names = split(header);
    auto cells = split(row);
    for (size_t i = 0; i < names.size() && i < cells.size(); ++i) {
        if (names[i] == "mean_Ur" && a.mean_ur < 0) a.mean_ur = std::stod(cells[i]);
        if (names[i] == "mean_absA" && a.mean_absa < 0) a.mean_absa = std::stod(cells[i]);
    }
    if (a.mean_ur < 0 || a.mean_absa < 0)
        throw std::runtime_error("means CSV is missing mean_Ur / mean_absA columns");
}

int cmd_analyze(AnalyzeArgs a) {
    SchemeConfig cfg = make_scheme(a, std::cerr);
    ChannelRule channel = make_channel(a);
    load_means(a);
    const bool want_delay = a.what == "delay" || a.what == "both";
    const bool want_complexity = a.what == "complexity" || a.what == "both";
    if (!want_delay && !want_complexity)
        throw CLI::ValidationError("--what", "expected delay|complexity|both");

    std::string e_d, e_d_bound, ops, ops_per_bit, lower_bound;
    if (want_delay) {
        if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed) {
            std::cerr << "error: the circular-shift delay law has no closed form here; use "
                         "`simulate`, or `verify` for the bound against GF(q <= 1/p0)\n";
            return 2;
        }
        std::vector<double> ps;
        if (channel.kind == ChannelRule::Kind::List) {
            if (channel.list.size() != 1 && static_cast<int>(channel.list.size()) != a.R)
                throw CLI::ValidationError("--p-list", "needs one value or one per receiver");
            ps = channel.list.size() == 1 ? std::vector<double>(static_cast<size_t>(a.R), channel.list[0])
                                          : channel.list;
        } else {
            // expectation over the channel draw is approximated by the midpoint
            ps.assign(static_cast<size_t>(a.R), nominal_mean_p(channel));
            std::cerr << "note: ranged channel: closed-form delay evaluated at the midpoint p_r\n";
        }
        SystemDelay sd = cfg.kind == SchemeKind::Perfect
                             ? expected_system_delay_perfect(ps, cfg.P, 1e-12)
                             : expected_system_delay_gf(cfg.q(), ps, cfg.P, 1e-12);
        e_d = fmt_double(sd.value);
        e_d_bound = fmt_double(sd.remainder_bound);
    }
    if (want_complexity) {
        double p_r = nominal_mean_p(channel);
        double v = -1;
        bool lb = false;
        if (cfg.kind == SchemeKind::Perfect) {
            std::cerr << "error: the perfect scheme is abstract; it has no decode cost model\n";
            return 2;
        }
        if (cfg.kind == SchemeKind::ConvGF && cfg.L == 1) {
            if (a.mean_absa < 0)
                throw std::runtime_error("GF(2) bound needs --mean-absa or --means-from");
            v = gf2_complexity_lower_bound(cfg.M, cfg.P, p_r, a.mean_absa);
            lb = true;
        } else if (cfg.kind == SchemeKind::ConvGF) {
            v = (a.mean_ur >= 0 && a.mean_absa >= 0)
                    ? conv_complexity_expected(cfg.M, cfg.P, cfg.L, p_r, a.mean_ur, a.mean_absa)
                    : conv_complexity_approx(cfg.M, cfg.P, cfg.L, p_r);
        } else {
            if (a.mean_ur < 0 || a.mean_absa < 0)
                throw std::runtime_error(
                    "circular-shift cost model needs --mean-ur and --mean-absa (or --means-from)");
            v = circ_complexity_expected(cfg.M, cfg.P, cfg.L, cfg.p0, p_r, a.mean_ur, a.mean_absa);
            if (cfg.kind == SchemeKind::CircRed)
                v -= static_cast<double>(cfg.P) * (cfg.M / cfg.L) * (cfg.L - 1);
        }
        ops = fmt_double(v);
        ops_per_bit = fmt_double(v / (static_cast<double>(cfg.P) * cfg.M));
        lower_bound = lb ? "true" : "false";
    }
    std::ostringstream os;
    os << "scheme,L,p0,P,M,R,what,E_D,E_D_trunc_bound,ops,ops_per_bit,lower_bound\n";
    os << scheme_column(cfg) << "," << (cfg.kind == SchemeKind::Perfect ? "" : std::to_string(cfg.L))
       << "," << p0_column(cfg) << "," << cfg.P << "," << cfg.M << "," << a.R << "," << a.what << ","
       << e_d << "," << e_d_bound << "," << ops << "," << ops_per_bit << "," << lower_bound << "\n";
    write_output(a.out, os.str());
    return 0;
}

// ---- sweep ----

struct SweepArgs : CommonArgs {
    int figure = 1;
    std::string P_range = "5:30:5";
};

struct SweepEntry {
    SchemeConfig cfg;
    std::string label;
};

int cmd_sweep(SweepArgs a) {
    size_t c1 = a.P_range.find(':');
    size_t c2 = a.P_range.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--P-range", "expected a:b:step");
    int pa = std::stoi(a.P_range.substr(0, c1));
    int pb = std::stoi(a.P_range.substr(c1 + 1, c2 - c1 - 1));
    int pstep = std::stoi(a.P_range.substr(c2 + 1));
    if (pa < 1 || pb < pa || pstep < 1)
        throw CLI::ValidationError("--P-range", "need a >= 1, b >= a, step >= 1");

    ChannelRule channel = make_channel(a);
    const double pbar = nominal_mean_p(channel);
    const int threads = a.threads > 0 ? a.threads : default_threads();

    auto scheme_cfg = [&](SchemeKind k, int L, Rational p0, int P) {
        SchemeConfig cfg;
        cfg.kind = k;
        cfg.L = L;
        cfg.P = P;
        cfg.M = ((a.M + L - 1) / L) * L;
        cfg.p0 = p0;
        cfg.validate();
        return cfg;
    };
    auto run = [&](const SchemeConfig& cfg, bool decode) {
        ExperimentSpec spec;
        spec.scheme = cfg;
        spec.channel = channel;
        spec.R = a.R;
        spec.trials = a.trials;
        spec.base_seed = a.seed;
        spec.decode_payloads = decode;
        spec.threads = threads;
        return run_experiment(spec);
    };

    std::ostringstream os;
    os << "figure,scheme,L,p0,P,M,R,trials,seed,delay_per_P,delay_norm,ops_per_bit,ops_norm,"
          "lower_bound\n";
    auto emit = [&](const SchemeConfig& cfg, const std::string& delay_per_P,
                    const std::string& delay_norm, const std::string& ops_per_bit,
                    const std::string& ops_norm, bool lower) {
        os << a.figure << "," << scheme_column(cfg) << ","
           << (cfg.kind == SchemeKind::Perfect ? "" : std::to_string(cfg.L)) << ","
           << p0_column(cfg) << "," << cfg.P << "," << cfg.M << "," << a.R << "," << a.trials << ","
           << a.seed << "," << delay_per_P << "," << delay_norm << "," << ops_per_bit << ","
           << ops_norm << "," << (lower ? "true" : "false") << "\n";
    };

    for (int P = pa; P <= pb; P += pstep) {
        if (a.figure == 1) {
            std::vector<SchemeConfig> cfgs;
            cfgs.push_back(scheme_cfg(SchemeKind::Perfect, 1, {0, 1}, P));
            for (int L : {1, 2, 4, 10}) cfgs.push_back(scheme_cfg(SchemeKind::ConvGF, L, {0, 1}, P));
            cfgs.push_back(scheme_cfg(SchemeKind::Circ, 4, {1, 4}, P));
            cfgs.push_back(scheme_cfg(SchemeKind::Circ, 4, {1, 2}, P));
            cfgs.push_back(scheme_cfg(SchemeKind::Circ, 10, {1, 4}, P));
            for (const auto& cfg : cfgs) {
                auto st = run(cfg, false);
                emit(cfg, fmt_double(st.mean_D_per_P), "", "", "", false);
            }
        } else if (a.figure == 2) {
            // cost curves evaluated from the cost models at simulated means
            auto gf2 = run(scheme_cfg(SchemeKind::ConvGF, 1, {0, 1}, P), false);
            double gf2v = gf2_complexity_lower_bound(a.M, P, pbar, gf2.mean_absA);
            emit(scheme_cfg(SchemeKind::ConvGF, 1, {0, 1}, P),
                 "", "", fmt_double(gf2v / (static_cast<double>(P) * a.M)), "", true);
            for (int L : {4, 10}) {
                auto cfg = scheme_cfg(SchemeKind::ConvGF, L, {0, 1}, P);
                auto st = run(cfg, false);
                double v = conv_complexity_expected(cfg.M, P, L, pbar, st.mean_Ur, st.mean_absA);
                emit(cfg, "", "", fmt_double(v / (static_cast<double>(P) * cfg.M)), "", false);
            }
            for (Rational p0 : {Rational{1, 4}, Rational{1, 2}}) {
                auto cfg = scheme_cfg(SchemeKind::Circ, 4, p0, P);
                auto st = run(cfg, false);
                double v = circ_complexity_expected(cfg.M, P, 4, p0, pbar, st.mean_Ur, st.mean_absA);
                emit(cfg, "", "", fmt_double(v / (static_cast<double>(P) * cfg.M)), "", false);
                auto cfgr = scheme_cfg(SchemeKind::CircRed, 4, p0, P);
                double vr = v - static_cast<double>(P) * (cfg.M / 4) * 3;
                emit(cfgr, "", "", fmt_double(vr / (static_cast<double>(P) * cfg.M)), "", false);
            }
        } else if (a.figure == 3) {
            auto perf = run(scheme_cfg(SchemeKind::Perfect, 1, {0, 1}, P), false);
            auto gf2 = run(scheme_cfg(SchemeKind::ConvGF, 1, {0, 1}, P), false);
            double gf2v = gf2_complexity_lower_bound(a.M, P, pbar, gf2.mean_absA);
            emit(scheme_cfg(SchemeKind::ConvGF, 1, {0, 1}, P),
                 fmt_double(gf2.mean_D_per_P), fmt_double(gf2.mean_D / perf.mean_D), "",
                 fmt_double(1.0), true);
            for (Rational p0 : {Rational{1, 6}, Rational{1, 4}, Rational{1, 2}, Rational{3, 4}}) {
                for (auto kind : {SchemeKind::Circ, SchemeKind::CircRed}) {
                    auto cfg = scheme_cfg(kind, 4, p0, P);
                    auto st = run(cfg, false);
                    double v =
                        circ_complexity_expected(cfg.M, P, 4, p0, pbar, st.mean_Ur, st.mean_absA);
                    if (kind == SchemeKind::CircRed)
                        v -= static_cast<double>(P) * (cfg.M / 4) * 3;
                    emit(cfg, fmt_double(st.mean_D_per_P), fmt_double(st.mean_D / perf.mean_D),
                         fmt_double(v / (static_cast<double>(P) * cfg.M)), fmt_double(v / gf2v),
                         false);
                }
            }
        } else {
            throw CLI::ValidationError("--figure", "expected 1, 2 or 3");
        }
    }
    write_output(a.out, os.str());
    return 0;
}

// ---- verify ----

struct VerifyArgs {
    std::string budget = "quick";
    uint64_t seed = 1;
    std::string json;
    std::string out;
    int threads = 0;
};

int cmd_verify(const VerifyArgs& a) {
    verify::Options opt;
    opt.budget = a.budget == "full" ? verify::Budget::Full : verify::Budget::Quick;
    if (a.budget != "full" && a.budget != "quick")
        throw CLI::ValidationError("--budget", "expected quick|full");
    opt.seed = a.seed;
    opt.threads = a.threads > 0 ? a.threads : default_threads();
    auto results = verify::run_all(opt);
    write_output(a.out, verify::render_text(results));
    if (!a.json.empty()) {
        std::ofstream f(a.json, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open JSON report path: " + a.json);
        f << verify::render_jsonl(results);
    }
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"systematic RLNC toolkit: erasure-broadcast simulation and closed-form analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    app.set_config("--config", "", "configuration file (INI, [subcommand] sections, same keys as the flags)");

    CommonArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo completion delay and decode cost");
    sim->add_option("--scheme", sim_args.scheme, "gf2|gf|perfect|circ|circ-red")->required();
    sim->add_option("--L", sim_args.L, "symbol length in bits");
    sim->add_option("--p0", sim_args.p0, "zero-coefficient probability N/D (circ schemes)");
    sim->add_option("--P", sim_args.P, "packets per generation");
    sim->add_option("--M", sim_args.M, "packet length in bits (padded to a multiple of L)");
    sim->add_option("--R", sim_args.R, "receivers");
    sim->add_option("--trials", sim_args.trials, "Monte Carlo trials");
    sim->add_option("--seed", sim_args.seed, "base seed");
    sim->add_option("--decode", sim_args.decode, "on|off: decode payloads and count operations");
    sim->add_flag("--independent-receivers", sim_args.independent,
                  "per-receiver coding draws (matches the product-form delay expectation)");
    sim->add_option("--out", sim_args.out, "output CSV path (default stdout)");
    sim->add_option("--threads", sim_args.threads, "worker count (default RLNC_THREADS or cores)");
    add_channel_flags(sim, sim_args);

    AnalyzeArgs an_args;
    auto* an = app.add_subcommand("analyze", "closed-form delay and decode-cost evaluation");
    an->add_option("--scheme", an_args.scheme, "gf2|gf|perfect|circ|circ-red")->required();
    an->add_option("--L", an_args.L, "symbol length in bits");
    an->add_option("--p0", an_args.p0, "zero-coefficient probability N/D");
    an->add_option("--P", an_args.P, "packets per generation");
    an->add_option("--M", an_args.M, "packet length in bits");
    an->add_option("--R", an_args.R, "receivers");
    an->add_option("--what", an_args.what, "delay|complexity|both");
    an->add_option("--mean-ur", an_args.mean_ur, "mean caught-original count for the cost models");
    an->add_option("--mean-absa", an_args.mean_absa, "mean residual size for the cost models");
    an->add_option("--means-from", an_args.means_from, "read the means from a simulate CSV");
    an->add_option("--out", an_args.out, "output CSV path (default stdout)");
    add_channel_flags(an, an_args);

    SweepArgs sw_args;
    auto* sw = app.add_subcommand("sweep", "figure-ready multi-scheme sweeps over P");
    sw->add_option("--figure", sw_args.figure, "1: delay/packet, 2: ops/bit, 3: trade-off");
    sw->add_option("--P-range", sw_args.P_range, "a:b:step");
    sw->add_option("--M", sw_args.M, "packet length in bits");
    sw->add_option("--R", sw_args.R, "receivers");
    sw->add_option("--trials", sw_args.trials, "trials per point")->default_val(2000);
    sw->add_option("--seed", sw_args.seed, "base seed");
    sw->add_option("--out", sw_args.out, "output CSV path (default stdout)");
    sw->add_option("--threads", sw_args.threads, "worker count");
    add_channel_flags(sw, sw_args);

    VerifyArgs vf_args;
    auto* vf = app.add_subcommand("verify", "property and oracle suite");
    vf->add_option("--budget", vf_args.budget, "quick|full");
    vf->add_option("--seed", vf_args.seed, "suite seed");
    vf->add_option("--json", vf_args.json, "also write a JSON-lines report here");
    vf->add_option("--out", vf_args.out, "text report path (default stdout)");
    vf->add_option("--threads", vf_args.threads, "worker count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (an->parsed()) return cmd_analyze(an_args);
        if (sw->parsed()) return cmd_sweep(sw_args);
        if (vf->parsed()) return cmd_verify(vf_args);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
