#include "horocount/cli.hpp"

#include "horocount/acceptance.hpp"
#include "horocount/constants.hpp"
#include "horocount/dynamics.hpp"
#include "horocount/enumerate.hpp"
#include "horocount/errors.hpp"
#include "horocount/manifest.hpp"
#include "horocount/measure.hpp"
#include "horocount/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace horocount::cli {

namespace {

const std::vector<std::string> kSubcommands{"constant", "count", "volume", "classify", "selftest"};

std::string num(double x) {
    if (std::isnan(x)) return "null";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct Common {
    int n = 0;
    std::string blocks;
    unsigned threads = 0;

    Partition partition() const { return Partition(n, parse_block_list(blocks)); }
};

void add_partition_options(CLI::App* sub, Common& c) {
    sub->add_option("--n", c.n, "Matrix size N")->required();
    sub->add_option("--blocks", c.blocks, "Block sizes, e.g. 2,1")->required();
}

/// Writes `text` to `path` and its manifest beside it.
void write_output(const std::string& path, const std::string& text, RunManifest manifest) {
    std::ofstream f(path);
    if (!f) throw ResourceError("cannot write " + path);
    f << text;
    f.close();
    manifest.outputs = {path};
    manifest.finished = utc_timestamp();
    manifest.write(manifest_path_for(path));
}

// --- constant ------------------------------------------------------------------

std::string constant_json(const Partition& p) {
    const auto br = constants::counting_breakdown(p);
    const auto& cc = br.constant;
    std::ostringstream os;
    os << "{\"n\":" << p.n() << ",\"blocks\":" << p.to_json() << ",\"p\":" << num(cc.poly_exponent())
       << ",\"q\":" << num(cc.exp_rate) << ",\"c\":" << num(cc.coefficient) << ",\"components\":{"
       << "\"C4\":" << num(br.haar.c4) << ",\"C6\":" << num(br.haar.c6) << ",\"C7\":" << num(br.haar.c7)
       << ",\"volK\":" << num(br.haar.vol_k) << ",\"volK_I0\":" << num(br.haar.vol_k_i0)
       << ",\"volSL\":" << num(br.vol_sl) << ",\"pi0\":" << br.pi0 << ",\"so_z_order\":" << num(br.so_z_order)
       << ",\"block_factor\":" << num(br.block_factor) << ",\"ghor_covolume\":" << num(br.ghor_covolume)
       << ",\"prefactor\":" << num(br.prefactor) << "}}";
    return os.str();
}

std::string constant_text(const Partition& p) {
    const auto br = constants::counting_breakdown(p);
    std::ostringstream os;
    os << "N(R) ~ c * R^p * exp(q R) for blocks " << p.to_json() << "\n"
       << "p = " << num(br.constant.poly_exponent()) << "\nq = " << num(br.constant.exp_rate)
       << "\nc = " << num(br.constant.coefficient) << "\n";
    return os.str();
}

// --- count -----------------------------------------------------------------------

struct CountRow {
    double radius;
    std::size_t count;
    double asymptotic;
    std::optional<double> ratio;
    std::string method;
    std::string margin;
    std::string depth;
    double seconds;
};

std::string count_csv(const std::vector<CountRow>& rows) {
    std::ostringstream os;
    os << "R,count,asymptotic,ratio,method,margin,depth,seconds\n";
    for (const auto& r : rows)
        os << num(r.radius) << ',' << r.count << ',' << num(r.asymptotic) << ','
           << (r.ratio ? num(*r.ratio) : "null") << ',' << r.method << ',' << r.margin << ',' << r.depth << ','
           << num(r.seconds) << '\n';
    return os.str();
}

std::vector<CountRow> rows_from(const enumerate::EnumerationReport& rep, const std::vector<double>& radii) {
    const auto cc = constants::counting_constant(rep.partition);
    std::vector<CountRow> rows;
    for (double r : radii) {
        CountRow row{r, 0, constants::asymptotic_count(cc, r), std::nullopt, enumerate::to_string(rep.method), "", "",
                     rep.seconds};
        row.count = static_cast<std::size_t>(std::count_if(rep.cosets.begin(), rep.cosets.end(),
                                                           [&](const auto& c) { return c.height <= r + 1e-9; }));
        if (row.asymptotic > 0) row.ratio = static_cast<double>(row.count) / row.asymptotic;
        if (rep.method == enumerate::Method::bfs) {
            row.margin = num(rep.margin);
            row.depth = std::to_string(rep.max_depth);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

unsigned thread_count(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("HOROCOUNT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ValidationError(std::string("HOROCOUNT_THREADS must be a positive integer, got '") + env + "'");
    }
    return resolve_threads(0);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || (args[0].rfind("-", 0) != 0 &&
                         std::find(kSubcommands.begin(), kSubcommands.end(), args[0]) == kSubcommands.end())) {
        err << "usage: horocount {constant|count|volume|classify|selftest} [options]\n";
        if (!args.empty()) err << "unknown subcommand '" << args[0] << "'\n";
        return kUnknownSubcommand;
    }

    CLI::App app{"Counting lifts of horocycles in SL_N(R)/SL_N(Z)"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads_flag = 0;
    app.add_option("--threads", threads_flag, "Worker threads (default: HOROCOUNT_THREADS or hardware)");

    Common common;

    auto* constant = app.add_subcommand("constant", "Asymptotic counting constant");
    add_partition_options(constant, common);
    bool as_json = false;
    std::string out_path;
    constant->add_flag("--json", as_json, "Emit JSON");
    constant->add_option("--out", out_path, "Also write the JSON to this file");

    auto* count = app.add_subcommand("count", "Enumerate horocycle lifts of height <= R");
    add_partition_options(count, common);
    std::vector<double> radii;
    std::string method = "bfs";
    enumerate::BfsOptions bfs_opt;
    enumerate::BruteOptions brute_opt;
    std::string csv_path;
    count->add_option("--radius", radii, "Radius or comma-separated radii")->required()->delimiter(',');
    count->add_option("--method", method, "bfs, brute or both")->check(CLI::IsMember({"bfs", "brute", "both"}));
    count->add_option("--margin", bfs_opt.margin, "BFS pruning margin above R");
    count->add_option("--max-depth", bfs_opt.max_depth, "BFS depth limit (0: automatic)");
    count->add_option("--max-states", bfs_opt.max_states, "BFS state budget");
    count->add_option("--entry-bound", brute_opt.entry_bound, "Brute-force entry bound (0: automatic)");
    count->add_flag("--stabilize", brute_opt.stabilize, "Double the entry bound until the count is stable");
    count->add_option("--csv", csv_path, "Write the table to this CSV file");

    auto* volume = app.add_subcommand("volume", "Quadrature of the A-part measure");
    add_partition_options(volume, common);
    std::vector<double> vol_radii;
    std::string region = "b+", density = "haar";
    measure::RegionSpec rspec;
    measure::Budget budget;
    std::uint64_t mc_samples = 0;
    double grid_step = 0.0;
    volume->add_option("--radius", vol_radii, "Radius or comma-separated radii")->required()->delimiter(',');
    volume->add_option("--region", region, "ball, b+, bc+ or annulus");
    volume->add_option("--offset", rspec.offset, "Cone offset C <= 0 for bc+");
    volume->add_option("--epsilon", rspec.epsilon, "Inner radius fraction for annulus");
    volume->add_option("--density", density, "haar or exponential")->check(CLI::IsMember({"haar", "exponential"}));
    auto* mc_opt = volume->add_option("--mc", mc_samples, "Monte Carlo with this many samples");
    auto* grid_opt = volume->add_option("--grid", grid_step, "Product grid with this step");
    mc_opt->excludes(grid_opt);
    volume->add_option("--seed", budget.seed, "Random seed");
    volume->add_option("--csv", csv_path, "Write the table to this CSV file");

    auto* classify = app.add_subcommand("classify", "Limit of translated horocycle measures");
    add_partition_options(classify, common);
    std::string a_behavior, b_behavior;
    classify->add_option("--a-behavior", a_behavior, "Per block: unbounded or identity (default identity)");
    classify->add_option("--b-behavior", b_behavior, "Per prefix: infinity, one or zero (last may be omitted)");
    classify->add_option("--out", out_path, "Also write the JSON to this file");

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite at reduced scale");
    bool full = false;
    selftest->add_flag("--full", full, "Use the full acceptance scale");

    std::vector<std::string> argv_store{"horocount"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        for (auto* sub : app.get_subcommands()) out << sub->help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    RunManifest manifest;
    manifest.argv = args;
    manifest.tool_version = tool_version();
    manifest.started = utc_timestamp();

    try {
        const unsigned threads = thread_count(threads_flag);
        manifest.parameters["threads"] = threads;

        if (constant->parsed()) {
            manifest.subcommand = "constant";
            const Partition p = common.partition();
            manifest.parameters["n"] = p.n();
            manifest.parameters["blocks"] = p.sizes();
            const std::string json = constant_json(p);
            out << (as_json ? json + "\n" : constant_text(p));
            if (!out_path.empty()) write_output(out_path, json + "\n", manifest);
            return kOk;
        }

        if (count->parsed()) {
            manifest.subcommand = "count";
            const Partition p = common.partition();
            for (double r : radii)
                if (!(r >= 0)) throw ValidationError("radius must be nonnegative");
            std::sort(radii.begin(), radii.end());
            const double r_max = radii.back();
            bfs_opt.threads = brute_opt.threads = threads;
            manifest.parameters = {{"n", p.n()},
                                   {"blocks", p.sizes()},
                                   {"radii", radii},
                                   {"method", method},
                                   {"margin", bfs_opt.margin},
                                   {"max_depth", bfs_opt.max_depth},
                                   {"max_states", bfs_opt.max_states},
                                   {"entry_bound", brute_opt.entry_bound},
                                   {"stabilize", brute_opt.stabilize},
                                   {"threads", threads}};
            std::vector<CountRow> rows;
            std::optional<enumerate::EnumerationReport> bfs, brute;
            if (method != "brute") {
                if (!(r_max > 0)) throw ValidationError("the BFS needs a positive radius");
                bfs = enumerate::enumerate_bfs(p, r_max, bfs_opt);
                manifest.parameters["max_depth_used"] = bfs->max_depth;
                const auto r = rows_from(*bfs, radii);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            if (method != "bfs") {
                brute = enumerate::enumerate_brute(p, r_max, brute_opt);
                manifest.parameters["entry_bound_used"] = brute->entry_bound;
                const auto r = rows_from(*brute, radii);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            if (bfs && brute) {
                enumerate::check_brute_covers(*bfs, *brute);
                if (enumerate::coset_keys(*bfs, r_max) != enumerate::coset_keys(*brute, r_max))
                    throw enumerate::InconsistencyError("BFS and brute-force coset sets differ");
            }
            const std::string csv = count_csv(rows);
            out << csv;
            if (!csv_path.empty()) write_output(csv_path, csv, manifest);
            return kOk;
        }

        if (volume->parsed()) {
            manifest.subcommand = "volume";
            const Partition p = common.partition();
            rspec.region = measure::parse_region(region);
            budget.threads = threads;
            measure::Method m = measure::Method::grid;
            if (mc_samples > 0) {
                m = measure::Method::monte_carlo;
                budget.samples = mc_samples;
            }
            if (grid_step > 0) budget.grid_step = grid_step;
            manifest.parameters = {{"n", p.n()},           {"blocks", p.sizes()},         {"radii", vol_radii},
                                   {"region", region},     {"offset", rspec.offset},      {"epsilon", rspec.epsilon},
                                   {"density", density},   {"method", measure::to_string(m)},
                                   {"samples", budget.samples}, {"grid_step", budget.grid_step}, {"threads", threads}};
            if (m == measure::Method::monte_carlo) manifest.seed = budget.seed;
            std::ostringstream os;
            os << "R,region,method,estimate,error,samples,grid_step,seed,closed_form,ratio\n";
            for (double r : vol_radii) {
                const auto q = density == "haar"
                                   ? measure::mu_A_ball(p, r, rspec, m, budget)
                                   : measure::cone_integral(p, rspec.region == measure::Region::bc_plus ? rspec.offset : 0.0,
                                                            r, m, budget);
                const double closed = measure::closed_form_asymptotic(p, r);
                os << num(r) << ',' << region << ',' << measure::to_string(m) << ',' << num(q.estimate) << ','
                   << num(q.standard_error) << ',' << q.samples << ',' << num(q.grid_step) << ','
                   << (m == measure::Method::monte_carlo ? std::to_string(q.seed) : "") << ',' << num(closed) << ','
                   << num(q.estimate / closed) << '\n';
            }
            out << os.str();
            if (!csv_path.empty()) write_output(csv_path, os.str(), manifest);
            return kOk;
        }

        if (classify->parsed()) {
            manifest.subcommand = "classify";
            const Partition p = common.partition();
            const auto k0 = static_cast<std::size_t>(p.num_blocks());
            dynamics::CleanSequenceSpec spec{p, std::vector<dynamics::ABehavior>(k0, dynamics::ABehavior::identity),
                                             std::vector<dynamics::BBehavior>(k0, dynamics::BBehavior::constant_one)};
            const auto a_items = split(a_behavior);
            if (!a_items.empty()) {
                if (a_items.size() != k0) throw ValidationError("--a-behavior needs one entry per block");
                for (std::size_t k = 0; k < k0; ++k) spec.a[k] = dynamics::parse_a_behavior(a_items[k]);
            }
            const auto b_items = split(b_behavior);
            if (!b_items.empty()) {
                if (b_items.size() != k0 && b_items.size() != k0 - 1)
                    throw ValidationError("--b-behavior needs one entry per prefix (the last may be omitted)");
                for (std::size_t k = 0; k < b_items.size(); ++k) spec.b[k] = dynamics::parse_b_behavior(b_items[k]);
            }
            manifest.parameters = {{"n", p.n()}, {"blocks", p.sizes()}, {"a_behavior", a_behavior}, {"b_behavior", b_behavior}};
            const std::string json = dynamics::classify_limit(spec).to_json();
            out << json << '\n';
            if (!out_path.empty()) write_output(out_path, json + "\n", manifest);
            return kOk;
        }

        if (selftest->parsed()) {
            const auto results = acceptance::run_all(full ? acceptance::Scale::full : acceptance::Scale::quick, threads, out);
            const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
            out << (failed == 0 ? "selftest passed" : "selftest FAILED") << " (" << results.size() - failed << "/"
                << results.size() << ")\n";
            return failed == 0 ? kOk : kFailure;
        }
    } catch (const enumerate::EnumerationOverflow& e) {
        err << "resource error: " << e.what() << " (partial result: " << e.partial.count
            << " cosets found before stopping)\n";
        return kResource;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return kResource;
    }
    return kFailure;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace horocount::cli
