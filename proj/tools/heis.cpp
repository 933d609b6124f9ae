// Command-line front end for the heis library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "heis/ccmetric.hpp"
#include "heis/cuts.hpp"
#include "heis/distortion.hpp"
#include "heis/io.hpp"
#include "heis/lines.hpp"
#include "heis/monotone.hpp"

namespace {

using heis::io::json;
using heis::io::format_double;

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
};

// A value is inline JSON unless it starts with '@', which names a file.
json load(const std::string& value, const std::string& what) {
    if (!value.empty() && value[0] == '@') return heis::io::read_file(value.substr(1));
    return heis::io::parse(value, what);
}

std::uint64_t need_seed(const Common& c, const char* sub) {
    if (!c.seed) throw heis::PreconditionError(std::string(sub) + ": --seed is required");
    return *c.seed;
}

heis::Box window_from(const std::string& text) {
    const std::string wrapped = text.find(',') != std::string::npos && text.front() != '[' ? "[" + text + "]" : text;
    return heis::io::box_from(heis::io::parse(wrapped, "--window"), "--window");
}

std::vector<double> number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw heis::io::SchemaError(std::string(what) + ": cannot parse \"" + tok + "\"");
        }
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw heis::PreconditionError("cannot write " + c.out);
    f << text;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string line;
    for (const auto& c : cells) {
        if (!line.empty()) line += ',';
        line += c;
    }
    return line + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heisenberg group geometry, cut metrics and L1 distortion"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub, bool with_seed, bool tabular = false) {
        if (with_seed) sub->add_option("--seed", common.seed, "64-bit seed (required)");
        sub->add_option("--out", common.out, "write output to this file instead of stdout");
        if (tabular) {
            sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        } else {
            sub->add_option("--format", common.format, "json only")->check(CLI::IsMember({"json"}));
        }
    };
    std::function<void()> action;

    // dist
    std::string p_text, q_text;
    double oracle_eps = 0.0;
    auto* dist = app.add_subcommand("dist", "CC distance between two points");
    dist->add_option("--p", p_text, "[a,b,c]")->required();
    dist->add_option("--q", q_text, "[a,b,c]")->required();
    dist->add_option("--oracle-eps", oracle_eps, "also evaluate the lattice oracle at this step");
    add_common(dist, false, true);
    dist->callback([&] {
        action = [&] {
            const auto p = heis::io::point_from(load(p_text, "--p"), "--p");
            const auto q = heis::io::point_from(load(q_text, "--q"), "--q");
            const double d = heis::cc_distance(p, q);
            std::optional<double> o;
            if (oracle_eps > 0.0) o = heis::grid_oracle_distance(p, q, oracle_eps);
            if (common.format == "json") {
                json j = {{"p", heis::io::to_json(p)}, {"q", heis::io::to_json(q)}, {"distance", d}};
                if (o) j["oracle"] = *o;
                emit(common, dump(j));
            } else {
                emit(common, format_double(d) + (o ? " " + format_double(*o) : "") + "\n");
            }
        };
    });

    // geodesic
    std::size_t geo_samples = 65;
    auto* geo = app.add_subcommand("geodesic", "sampled minimizing geodesic");
    geo->add_option("--p", p_text)->required();
    geo->add_option("--q", q_text)->required();
    geo->add_option("--samples", geo_samples, "number of samples (>= 2)");
    add_common(geo, false);
    geo->callback([&] {
        action = [&] {
            const auto p = heis::io::point_from(load(p_text, "--p"), "--p");
            const auto q = heis::io::point_from(load(q_text, "--q"), "--q");
            emit(common, dump(heis::io::to_json(heis::cc_geodesic(p, q, geo_samples))));
        };
    });

    // lift
    std::string start_text = "[0,0,0]", path_text;
    auto* lift = app.add_subcommand("lift", "horizontal lift of a planar polyline");
    lift->add_option("--start", start_text, "[a,b,c]; must project to the first vertex");
    lift->add_option("--path", path_text, "[[x,y],...] or @file")->required();
    add_common(lift, false);
    lift->callback([&] {
        action = [&] {
            const auto start = heis::io::point_from(load(start_text, "--start"), "--start");
            const auto path = heis::io::polyline_from(load(path_text, "--path"), "--path");
            const auto l = heis::lift_polyline(start, path);
            emit(common, dump({{"endpoint", heis::io::to_json(l.endpoint)},
                               {"heights", l.heights},
                               {"area", heis::shoelace_area(path.vertices())}}));
        };
    });

    // line
    std::string l1_text, l2_text, window_text = "2";
    double tol = 1e-10;
    std::size_t n_lines = 10000;
    auto* line = app.add_subcommand("line", "horizontal lines: classify, join, hyperbola, sample");
    line->require_subcommand(1);
    auto* classify = line->add_subcommand("classify", "classify a pair of lines");
    classify->add_option("--l1", l1_text)->required();
    classify->add_option("--l2", l2_text)->required();
    classify->add_option("--tol", tol);
    add_common(classify, false);
    classify->callback([&] {
        action = [&] {
            const auto a = heis::io::line_from_json(load(l1_text, "--l1"), "--l1");
            const auto b = heis::io::line_from_json(load(l2_text, "--l2"), "--l2");
            const auto c = heis::classify_pair(a, b, tol);
            json j = {{"class", heis::to_string(c.tag)}};
            if (c.witness) j["witness"] = heis::io::to_json(*c.witness);
            emit(common, dump(j));
        };
    });
    auto* join = line->add_subcommand("join", "lines through a point meeting a line");
    join->add_option("--p", p_text)->required();
    join->add_option("--line", l1_text)->required();
    add_common(join, false);
    join->callback([&] {
        action = [&] {
            const auto p = heis::io::point_from(load(p_text, "--p"), "--p");
            const auto l = heis::io::line_from_json(load(l1_text, "--line"), "--line");
            json out = json::array();
            for (const auto& m : heis::join_to_line(p, l)) out.push_back(heis::io::to_json(m));
            emit(common, dump(out));
        };
    });
    auto* hyp = line->add_subcommand("hyperbola", "tangency hyperbola of a skew pair");
    hyp->add_option("--l1", l1_text)->required();
    hyp->add_option("--l2", l2_text)->required();
    add_common(hyp, false);
    hyp->callback([&] {
        action = [&] {
            const auto a = heis::io::line_from_json(load(l1_text, "--l1"), "--l1");
            const auto b = heis::io::line_from_json(load(l2_text, "--l2"), "--l2");
            emit(common, dump(heis::io::to_json(heis::hyperbola_of_skew(a, b))));
        };
    });
    auto* sample = line->add_subcommand("sample", "random lines meeting a window");
    sample->add_option("--window", window_text, "half-width or a_lo,a_hi,b_lo,b_hi,c_lo,c_hi");
    sample->add_option("--lines", n_lines);
    add_common(sample, true, true);
    sample->callback([&] {
        action = [&] {
            const auto seed = need_seed(common, "line sample");
            const auto lines = heis::sample_lines(window_from(window_text), n_lines, seed);
            if (common.format == "csv") {
                std::string text = csv_row({"a", "b", "c", "angle"});
                for (const auto& l : lines) {
                    text += csv_row({format_double(l.base.a), format_double(l.base.b), format_double(l.base.c),
                                     format_double(l.angle)});
                }
                emit(common, text);
                return;
            }
            json out = json::array();
            for (const auto& l : lines) out.push_back(heis::io::to_json(l));
            emit(common, dump(out));
        };
    });

    // cut-eval
    std::string measure_text, pairs_text;
    std::optional<std::size_t> samples;
    auto* cut = app.add_subcommand("cut-eval", "cut metric d_Sigma on point pairs");
    cut->add_option("--measure", measure_text, "CutMeasure JSON or @file")->required();
    cut->add_option("--pairs", pairs_text, "[[x, y], ...] or @file")->required();
    cut->add_option("--samples", samples, "Monte Carlo samples (ac_horizontal)");
    add_common(cut, true, true);
    cut->callback([&] {
        action = [&] {
            auto measure = heis::io::measure_from(load(measure_text, "--measure"), "--measure");
            if (auto* ac = std::get_if<heis::ACHorizontal>(&measure)) {
                ac->seed = need_seed(common, "cut-eval");
                if (samples) ac->samples = *samples;
            }
            const json pairs = load(pairs_text, "--pairs");
            if (!pairs.is_array()) throw heis::io::SchemaError("--pairs: expected an array");
            const bool as_json = common.format == "json";
            std::string text = as_json ? "" : csv_row({"xa", "xb", "xc", "ya", "yb", "yc", "d", "stderr"});
            json rows = json::array();
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const std::string at = "--pairs[" + std::to_string(i) + "]";
                if (!pairs[i].is_array() || pairs[i].size() != 2) throw heis::io::SchemaError(at + ": expected [x, y]");
                const auto x = heis::io::point_from(pairs[i][0], at + "[0]");
                const auto y = heis::io::point_from(pairs[i][1], at + "[1]");
                const auto v = heis::cut_distance(measure, x, y);
                if (as_json) {
                    rows.push_back({{"x", heis::io::to_json(x)}, {"y", heis::io::to_json(y)}, {"d", v.d},
                                    {"stderr", v.std_error}, {"boundary", v.boundary}});
                } else {
                    text += csv_row({format_double(x.a), format_double(x.b), format_double(x.c), format_double(y.a),
                                     format_double(y.b), format_double(y.c), format_double(v.d),
                                     format_double(v.std_error)});
                }
            }
            emit(common, as_json ? dump(rows) : text);
        };
    });

    // monotone
    std::string set_text;
    std::size_t trace_samples = 256;
    auto* mono = app.add_subcommand("monotone", "monotonicity defect of a set");
    mono->add_option("--set", set_text, "SetOracle JSON or @file")->required();
    mono->add_option("--lines", n_lines);
    mono->add_option("--samples", trace_samples, "samples per line");
    mono->add_option("--window", window_text);
    add_common(mono, true);
    mono->callback([&] {
        action = [&] {
            const auto seed = need_seed(common, "monotone");
            const auto set = heis::io::set_from(load(set_text, "--set"), "--set");
            const auto r = heis::monotonicity_defect(set, window_from(window_text), n_lines, trace_samples, seed);
            json j = heis::io::to_json(r);
            j["empirically_monotone"] = heis::empirically_monotone(r);
            emit(common, dump(j));
        };
    });

    // fit
    std::size_t budget = 20000;
    auto* fit = app.add_subcommand("fit", "best half-space approximation of a set");
    fit->add_option("--set", set_text)->required();
    fit->add_option("--samples", budget, "sample budget (>= 1000)");
    fit->add_option("--window", window_text);
    add_common(fit, true);
    fit->callback([&] {
        action = [&] {
            const auto seed = need_seed(common, "fit");
            const auto set = heis::io::set_from(load(set_text, "--set"), "--set");
            emit(common, dump(heis::io::to_json(heis::half_space_fit(set, window_from(window_text), budget, seed))));
        };
    });

    // distortion
    std::string metric_text, decomposition_text, pricing = "dantzig";
    bool exact = false;
    auto* dis = app.add_subcommand("distortion", "minimal L1 distortion by LP over the cut cone");
    auto* metric_opt = dis->add_option("--metric", metric_text, "FiniteMetric JSON or @file");
    auto* dec_opt = dis->add_option("--decomposition", decomposition_text, "embed a CutDecomposition instead");
    metric_opt->excludes(dec_opt);
    dis->add_flag("--exact", exact, "also re-solve in rational arithmetic (n <= 8)");
    dis->add_option("--pricing", pricing)->check(CLI::IsMember({"dantzig", "bland"}));
    add_common(dis, false);
    dis->callback([&] {
        action = [&] {
            if (!decomposition_text.empty()) {
                const auto d = heis::io::decomposition_from(load(decomposition_text, "--decomposition"), "--decomposition");
                emit(common, dump(heis::io::to_json(heis::embed_from_cuts(d))));
                return;
            }
            if (metric_text.empty()) throw heis::PreconditionError("distortion: --metric or --decomposition is required");
            const auto m = heis::io::metric_from(load(metric_text, "--metric"), "--metric");
            const auto d = heis::lp_distortion(m, pricing == "bland" ? heis::lp::Pricing::bland : heis::lp::Pricing::dantzig);
            json j = heis::io::to_json(d);
            if (exact) {
                const auto e = heis::lp_distortion_exact(m);
                j["exact"] = {{"rational", e.rational}, {"value", e.value}};
            }
            emit(common, dump(j));
        };
    });

    // collapse
    std::string arms = "1,2,4", chains = "2,4,6";
    double pitch = heis::default_chain_pitch();
    std::size_t n_max = 14;
    auto* col = app.add_subcommand("collapse", "central-collapse experiment on cross + chain configurations");
    col->add_option("--arms", arms, "comma-separated arm lengths");
    col->add_option("--chains", chains, "comma-separated chain lengths");
    col->add_option("--pitch", pitch, "chain pitch tau");
    col->add_option("--nmax", n_max, "largest point count (<= 14)");
    add_common(col, false, true);
    col->callback([&] {
        action = [&] {
            std::vector<std::size_t> lens;
            for (double v : number_list(chains, "--chains")) {
                if (v < 0 || v != std::floor(v)) throw heis::io::SchemaError("--chains: expected nonnegative integers");
                lens.push_back(static_cast<std::size_t>(v));
            }
            const auto rows = heis::center_collapse_report(number_list(arms, "--arms"), pitch, lens, n_max);
            if (common.format == "json") {
                json out = json::array();
                for (const auto& r : rows) {
                    out.push_back({{"config", r.config}, {"n", r.n}, {"distortion", r.distortion}, {"k", r.k},
                                   {"central_ratio", r.central_ratio}, {"horizontal_ratio_max", r.horizontal_ratio_max}});
                }
                emit(common, dump(out));
                return;
            }
            std::string text = csv_row({"config", "n", "distortion", "k", "central_ratio", "horizontal_ratio_max"});
            for (const auto& r : rows) {
                text += csv_row({"\"" + r.config + "\"", std::to_string(r.n), format_double(r.distortion),
                                 std::to_string(r.k), format_double(r.central_ratio), format_double(r.horizontal_ratio_max)});
            }
            emit(common, text);
        };
    });

    // fourier
    int kmax = 64;
    auto* fou = app.add_subcommand("fourier", "cosine coefficients of |sin|");
    fou->add_option("--kmax", kmax)->check(CLI::NonNegativeNumber);
    add_common(fou, false, true);
    fou->callback([&] {
        action = [&] {
            std::string text = csv_row({"k", "coefficient"});
            json out = json::array();
            for (int k = 0; k <= kmax; ++k) {
                const double c = heis::sinabs_fourier(k);
                text += csv_row({std::to_string(k), format_double(c)});
                out.push_back({{"k", k}, {"coefficient", c}});
            }
            emit(common, common.format == "json" ? dump(out) : text);
        };
    });

    // phi
    double lambda = 1.0, t = 0.0;
    int k = 0, eps = 1;
    std::string z_text = "[0,0]";
    auto* phi = app.add_subcommand("phi", "Strichartz eigenfunction value");
    phi->add_option("--lambda", lambda)->required();
    phi->add_option("--k", k)->check(CLI::NonNegativeNumber);
    phi->add_option("--eps", eps)->check(CLI::IsMember({1, -1}));
    phi->add_option("--z", z_text, "[x,y]");
    phi->add_option("--t", t);
    add_common(phi, false, true);
    phi->callback([&] {
        action = [&] {
            const auto z = heis::io::vec2_from(load(z_text, "--z"), "--z");
            const auto v = heis::eval_phi(lambda, k, eps, z, t);
            if (common.format == "json") {
                emit(common, dump({{"re", v.real()}, {"im", v.imag()}}));
            } else {
                emit(common, csv_row({"re", "im"}) + csv_row({format_double(v.real()), format_double(v.imag())}));
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        action();
    } catch (const heis::PreconditionError& e) {
        std::fprintf(stderr, "heis: error: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "heis: error: %s\n", e.what());
        return 2;
    } catch (const heis::NumericError& e) {
        std::fprintf(stderr, "heis: numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "heis: numeric failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
