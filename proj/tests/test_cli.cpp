#include "doctest.h"
#include "rabicd/cli/commands.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace rabicd;
using namespace rabicd::cli;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the installed tool through the shell, capturing stdout.
Run tool(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + RABICD_TOOL + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string preset(const std::string& name) { return std::string(RABICD_PRESETS) + "/" + name; }

const Table& table(const Report& r, const std::string& name) {
    for (const auto& t : r.tables)
        if (t.name == name) return t;
    FAIL("missing table " << name);
    throw std::logic_error("unreachable");
}

std::size_t col(const Table& t, const std::string& name) {
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        if (t.columns[j] == name) return j;
    FAIL("missing column " << name);
    return 0;
}

double num(const Table& t, std::size_t row, const std::string& c) { return std::get<double>(t.rows[row][col(t, c)]); }
std::string text(const Table& t, std::size_t row, const std::string& c) {
    return std::get<std::string>(t.rows[row][col(t, c)]);
}

RunConfig from_file(const std::string& name) {
    RunConfig c;
    c.load_file(preset(name));
    return c;
}

}  // namespace

TEST_CASE("config parsing and diagnostics") {
    RunConfig c;
    CHECK(c.real("tau") == 1.0);
    CHECK(c.origin("tau") == "default");
    c.parse_text("# comment\n  eta = 0.8  # trailing\n\netas = 0.25:0.25:1\n", "mem");
    CHECK(c.real("eta") == 0.8);
    CHECK(c.origin("eta") == "mem:2");
    CHECK(c.reals("etas") == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(parse_real_list("0.1, 0.2 0.3") == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(parse_real_list("").empty());
    CHECK(c.real("beta_inv_temp") == std::numeric_limits<double>::infinity());

    auto message = [](const std::string& text) {
        RunConfig r;
        try {
            r.parse_text(text, "f.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("tau = 1\nbogus = 3\n").find("f.cfg:2") != std::string::npos);
    CHECK(message("tau = 1\nbogus = 3\n").find("unknown key 'bogus'") != std::string::npos);
    CHECK(message("tau = fast\n").find("expected a real number") != std::string::npos);
    CHECK(message("cutoff = 2.5\n").find("expected an integer") != std::string::npos);
    CHECK(message("format = xml\n").find("not one of") != std::string::npos);
    CHECK(message("tau 1\n").find("f.cfg:1: expected 'key = value'") != std::string::npos);
    CHECK(message("etas = 1:0:2\n").find("step > 0") != std::string::npos);
    CHECK_THROWS_AS(c.load_file("/nonexistent/x.cfg"), ConfigError);
    CHECK_THROWS_AS(c.set_assignment("eta", "--set"), ConfigError);
}

TEST_CASE("config digest and canonical form") {
    RunConfig a, b;
    CHECK(a.digest() == b.digest());
    CHECK(a.digest().size() == 16);
    b.set("eta", "0.5", "x");
    CHECK(a.digest() != b.digest());
    b.set("eta", "0.25", "y");
    CHECK(a.digest() == b.digest());
    CHECK(a.canonical().find("eta = 0.25\n") != std::string::npos);
    CHECK(a.values().size() == config_keys().size());
    for (const auto& k : config_keys()) CHECK_NOTHROW(a.set(k.key, k.fallback, "default"));
}

TEST_CASE("number formatting and writers") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(-2.5e-20) == "-2.4999999999999999e-20");
    CHECK(format_real(std::nan("")) == "nan");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);

    Report r;
    r.command = "demo";
    r.meta = {{"note", "a"}};
    Table t;
    t.name = "rows";
    t.columns = {"x", "label", "k"};
    t.add({0.5, std::string("a,b"), 3LL});
    t.add({std::numeric_limits<double>::infinity(), std::string("q\"x"), -1LL});
    r.tables.push_back(t);
    CHECK_THROWS(t.add({1.0}));

    std::ostringstream csv;
    write_csv(r, csv);
    const std::string s = csv.str();
    CHECK(s.find("# artifact: rabicd ") == 0);
    CHECK(s.find("# config_digest: fnv1a64:" + r.config.digest()) != std::string::npos);
    CHECK(s.find("# config: tau = 1\n") != std::string::npos);
    CHECK(s.find("# table: rows\nx,label,k\n0.5,\"a,b\",3\ninf,\"q\"\"x\",-1\n") != std::string::npos);

    std::ostringstream js;
    write_json(r, js);
    const std::string j = js.str();
    CHECK(j.find("\"command\": \"demo\"") != std::string::npos);
    CHECK(j.find("[0.5, \"a,b\", 3]") != std::string::npos);
    CHECK(j.find("[null, \"q\\\"x\", -1]") != std::string::npos);
}

TEST_CASE("tool exit codes and precedence") {
    CHECK(tool("--help").code == 0);
    CHECK(tool("").code == kConfigError);
    CHECK(tool("explode").code == kConfigError);
    CHECK(tool("classify --no-such-flag").code == kConfigError);
    CHECK(tool("classify --set bogus=1").code == kConfigError);
    CHECK(tool("fidelity-sweep --etas ''").code == kConfigError);
    CHECK(tool("fidelity-sweep --gammas=-1 --protocols cd_free").code == kConfigError);
    CHECK(tool("classify --config /nonexistent.cfg").code == kConfigError);
    CHECK(tool("classify", "RABICD_WORKERS=zero").code == kConfigError);

    const Run keys = tool("--list-keys");
    CHECK(keys.code == 0);
    CHECK(keys.out.find("filter_gamma (real, default 0.001)") != std::string::npos);

    // default < config < env < --set < named flag
    const std::string base = "classify --gammas 1 --etas 0.1 ";
    CHECK(tool(base).out.find("# config: workers = 0\n") != std::string::npos);
    CHECK(tool(base, "RABICD_WORKERS=3").out.find("# config: workers = 3\n") != std::string::npos);
    CHECK(tool(base + "--set workers=2", "RABICD_WORKERS=3").out.find("# config: workers = 2\n") != std::string::npos);
    CHECK(tool(base + "--set workers=2 --workers 1", "RABICD_WORKERS=3").out.find("# config: workers = 1\n") !=
          std::string::npos);
    CHECK(tool("classify -c " + preset("fig1.cfg") + " --etas 0.1").out.find("# config: etas = 0.1\n") !=
          std::string::npos);

    const Run j = tool(base + "--format json");
    CHECK(j.code == 0);
    CHECK(j.out.find("\"regimes\"") != std::string::npos);
}

TEST_CASE("fidelity sweep command") {
    RunConfig c;
    c.set("gammas", "1", "t");
    c.set("etas", "0.25", "t");
    c.set("tau", "100", "t");
    c.set("protocols", "cd_free", "t");
    const CommandResult r = run_command("fidelity-sweep", c);
    CHECK(r.exit_code == kOk);
    const Table& t = table(r.report, "records");
    CHECK(t.columns == std::vector<std::string>{"gamma_ratio", "eta", "protocol", "fidelity", "infidelity", "alpha_c",
                                                "alpha_a", "parity_sector", "fidelity_global", "cutoff", "status"});
    REQUIRE(t.rows.size() == 1);
    CHECK(num(t, 0, "fidelity") >= 0.999);
    CHECK(num(t, 0, "infidelity") == doctest::Approx(1 - num(t, 0, "fidelity")));

    RunConfig e;
    e.set("etas", "", "t");
    std::ostringstream out, err;
    CHECK(execute("fidelity-sweep", e, out, err) == kConfigError);
    CHECK(err.str().find("etas") != std::string::npos);
    CHECK(out.str().empty());

    // Gamma = 0 cannot produce a protocol; the cell fails and the others still run.
    RunConfig p;
    p.set("gammas", "0, 1", "t");
    p.set("protocols", "cd_free", "t");
    std::ostringstream o2, e2;
    CHECK(execute("fidelity-sweep", p, o2, e2) == kPartialFailure);
    CHECK(o2.str().find(",error: ") != std::string::npos);
}

TEST_CASE("fidelity sweep preset at resonance") {
    const CommandResult r = run_command("fidelity-sweep", from_file("fig3b.cfg"));
    const Table& t = table(r.report, "records");
    CHECK(t.rows.size() == 4 * 6);
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        ++counts[text(t, i, "protocol")];
        CHECK(text(t, i, "status") == "ok");
    }
    CHECK(counts == std::map<std::string, int>{{"cd_free", 6}, {"coherent", 6}, {"filtered", 6}, {"superradiant", 6}});
}

TEST_CASE("manifold command") {
    RunConfig c;
    c.set("gammas", "1, 10", "t");
    c.set("etas", "0.5, 1", "t");
    c.set("protocols", "cd_free, optimized", "t");
    c.set("grid_points", "11", "t");
    const CommandResult r = run_command("manifold", c);
    const Table& t = table(r.report, "records");
    CHECK(t.rows.size() == 8);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(num(t, i, "norm_atomic_rel") >= 0.0);
        CHECK(num(t, i, "norm_cavity_rel") >= 0.0);
    }
    // Rows are gamma-major, then eta, then protocol; Gamma=10, eta=1 is last.
    CHECK(num(t, 6, "gamma_ratio") == 10.0);
    CHECK(num(t, 6, "eta") == 1.0);
    CHECK(num(t, 6, "fidelity") < num(t, 7, "fidelity"));
}

TEST_CASE("classify preset") {
    const CommandResult r = run_command("classify", from_file("fig1.cfg"));
    const Table& t = table(r.report, "regimes");
    REQUIRE(t.rows.size() == 3);
    CHECK(text(t, 0, "label") == "SC");
    CHECK(text(t, 1, "label") == "USC");
    CHECK(text(t, 2, "label") == "DSC");
    CHECK(r.report.meta.front() == std::pair<std::string, std::string>{"rwa_probe", "dynamic"});
}

TEST_CASE("floquet preset") {
    const CommandResult r = run_command("floquet", from_file("fig8.cfg"));
    const Table& s = table(r.report, "summary");
    CHECK(num(s, 0, "mean_fidelity") >= 0.995);
    const Table& tr = table(r.report, "traces");
    CHECK(tr.rows.size() > table(r.report, "stroboscopic").rows.size());
}

TEST_CASE("correlate and landscape commands") {
    RunConfig c;
    c.set("corr_points", "5", "t");
    c.set("quad_points", "21", "t");
    c.set("corr_steps", "200", "t");
    const CommandResult r = run_command("correlate", c);
    CHECK(table(r.report, "spearman").rows.size() == 4);
    CHECK(table(r.report, "samples").rows.size() == 24);
    CHECK(table(r.report, "samples").columns.back() == "action_superradiant");

    RunConfig l;
    l.set("landscape_points", "11", "t");
    l.set("metric", "full_trace", "t");
    const CommandResult lr = run_command("landscape", l);
    CHECK(table(lr.report, "landscape").rows.size() == 121);
    CHECK(table(lr.report, "minimum").rows.size() == 1);
}

TEST_CASE("repeat runs are byte identical") {
    const std::string args = "fidelity-sweep --gammas 1 --etas 0.5 --protocols cd_free,coherent --workers 1";
    const Run a = tool(args);
    const Run b = tool(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const std::string path = "cli_repeat.csv";
    CHECK(tool(args + " -o " + path).code == 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    // The header echoes the output path; data sections must match.
    auto data = [](const std::string& s) { return s.substr(s.find("# table:")); };
    CHECK(data(ss.str()) == data(a.out));
    std::remove(path.c_str());
}
