#include "ww/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace ww {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Ctx {
    int line;
    std::string key;
    std::string value;

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line, key, msg); }

    double real() const
    {
        try {
            size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size() || !std::isfinite(v)) fail("expected a finite number, got '" + value + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("expected a number, got '" + value + "'");
        }
    }

    long long integer() const
    {
        try {
            size_t pos = 0;
            const long long v = std::stoll(value, &pos);
            if (pos != value.size()) fail("expected an integer, got '" + value + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("expected an integer, got '" + value + "'");
        }
    }

    int int32() const
    {
        const long long v = integer();
        if (v < -(1LL << 31) || v >= (1LL << 31)) fail("integer out of range");
        return static_cast<int>(v);
    }

    bool flag() const
    {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        fail("expected true or false, got '" + value + "'");
    }
};

int parse_pow2_ratio(const Ctx& c, const std::string& s, int& q)
{
    const auto parts = split(s, '/');
    auto one = [&](const std::string& t) {
        try {
            size_t pos = 0;
            const int v = std::stoi(t, &pos);
            if (pos != t.size()) c.fail("bad scaling factor '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            c.fail("bad scaling factor '" + s + "'");
        }
    };
    if (parts.size() == 1) {
        q = 1;
        return one(parts[0]);
    }
    if (parts.size() != 2) c.fail("bad scaling factor '" + s + "'");
    q = one(parts[1]);
    return one(parts[0]);
}

using Setter = std::function<void(RunConfig&, const Ctx&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> m = {
        {"mode",
         [](RunConfig& r, const Ctx& c) {
             if (c.value == "disc")
                 r.mode = Mode::Disc;
             else if (c.value == "line")
                 r.mode = Mode::Line;
             else
                 c.fail("mode must be disc or line");
         }},
        {"n_grid", [](RunConfig& r, const Ctx& c) { r.n_grid = c.int32(); }},
        {"grid_offset", [](RunConfig& r, const Ctx& c) { r.grid_offset = c.real(); }},
        {"dealias_fraction", [](RunConfig& r, const Ctx& c) { r.dealias_fraction = c.real(); }},
        {"dt_init", [](RunConfig& r, const Ctx& c) { r.ctrl.dt_init = c.real(); }},
        {"cfl", [](RunConfig& r, const Ctx& c) { r.ctrl.cfl = c.real(); }},
        {"dt_max", [](RunConfig& r, const Ctx& c) { r.ctrl.dt_max = c.real(); }},
        {"dt_min", [](RunConfig& r, const Ctx& c) { r.ctrl.dt_min = c.real(); }},
        {"t_final", [](RunConfig& r, const Ctx& c) { r.ctrl.t_final = c.real(); }},
        {"krasny_eps", [](RunConfig& r, const Ctx& c) { r.ctrl.filter_eps = c.real(); }},
        {"tail_threshold", [](RunConfig& r, const Ctx& c) { r.ctrl.tail_threshold = c.real(); }},
        {"g", [](RunConfig& r, const Ctx& c) { r.g = c.real(); }},
        {"init.kind",
         [](RunConfig& r, const Ctx& c) {
             static const std::map<std::string, InitKind> k = {
                 {"trivial", InitKind::Trivial},     {"smooth", InitKind::Smooth},
                 {"crest", InitKind::Crest},         {"line_wave", InitKind::LineWave},
                 {"random", InitKind::Random},       {"checkpoint", InitKind::Checkpoint}};
             auto it = k.find(c.value);
             if (it == k.end()) c.fail("unknown init.kind '" + c.value + "'");
             r.init = it->second;
         }},
        {"init.R", [](RunConfig& r, const Ctx& c) { r.R = c.real(); }},
        {"init.delta", [](RunConfig& r, const Ctx& c) { r.delta = c.real(); }},
        {"init.m", [](RunConfig& r, const Ctx& c) { r.m = c.int32(); }},
        {"init.vel_modes",
         [](RunConfig& r, const Ctx& c) {
             r.vel_modes.clear();
             for (const auto& item : split(c.value, ',')) {
                 const auto kv = split(item, ':');
                 if (kv.size() != 2) c.fail("velocity modes are written m:amp[,m:amp...]");
                 Ctx sub{c.line, c.key, kv[0]};
                 Ctx amp{c.line, c.key, kv[1]};
                 r.vel_modes.push_back({sub.int32(), amp.real()});
             }
         }},
        {"init.vel_re", [](RunConfig& r, const Ctx& c) { r.vel.real(c.real()); }},
        {"init.vel_im", [](RunConfig& r, const Ctx& c) { r.vel.imag(c.real()); }},
        {"init.a", [](RunConfig& r, const Ctx& c) { r.a = c.real(); }},
        {"init.k", [](RunConfig& r, const Ctx& c) { r.k = c.int32(); }},
        {"init.nu", [](RunConfig& r, const Ctx& c) { r.crest.nu = c.real(); }},
        {"init.eps", [](RunConfig& r, const Ctx& c) { r.crest.eps = c.real(); }},
        {"init.taylor_terms", [](RunConfig& r, const Ctx& c) { r.crest.taylor_terms = c.int32(); }},
        {"init.rounding", [](RunConfig& r, const Ctx& c) { r.crest.rounding = c.real(); }},
        {"init.ladder", [](RunConfig& r, const Ctx& c) { r.crest.ladder = c.int32(); }},
        {"init.seed",
         [](RunConfig& r, const Ctx& c) {
             const long long v = c.integer();
             if (v < 0) c.fail("seed must be nonnegative");
             r.seed = static_cast<unsigned long long>(v);
         }},
        {"init.path", [](RunConfig& r, const Ctx& c) { r.checkpoint_in = c.value; }},
        {"output.path", [](RunConfig& r, const Ctx& c) { r.out_dir = c.value; }},
        {"output.every", [](RunConfig& r, const Ctx& c) { r.output_every = c.int32(); }},
        {"checkpoint.every", [](RunConfig& r, const Ctx& c) { r.checkpoint_every = c.int32(); }},
        {"verify.identities", [](RunConfig& r, const Ctx& c) { r.verify_identities = c.flag(); }},
        {"verify.refinement", [](RunConfig& r, const Ctx& c) { r.verify_refinement = c.flag(); }},
        {"verify.tol", [](RunConfig& r, const Ctx& c) { r.verify_tol = c.real(); }},
        {"verify.hilbert_corruption", [](RunConfig& r, const Ctx& c) { r.hilbert_corruption = c.real(); }},
        {"scale.list",
         [](RunConfig& r, const Ctx& c) {
             r.scale_list.clear();
             for (const auto& item : split(c.value, ',')) {
                 const auto kv = split(item, ':');
                 if (kv.size() != 2) c.fail("scaling pairs are written lam:s with lam = p or p/q");
                 ScalingParams p;
                 p.p = parse_pow2_ratio(c, kv[0], p.q);
                 p.s = Ctx{c.line, c.key, kv[1]}.real();
                 try {
                     p.check();
                 } catch (const InvalidInput& e) {
                     c.fail(e.what());
                 }
                 r.scale_list.push_back(p);
             }
         }},
        {"scale.time", [](RunConfig& r, const Ctx& c) { r.scale_time = c.real(); }},
    };
    return m;
}

std::string where(int line, const std::string& key)
{
    std::string s = "config";
    if (line > 0) s += " line " + std::to_string(line);
    if (!key.empty()) s += " key '" + key + "'";
    return s;
}

}  // namespace

ConfigError::ConfigError(int l, std::string k, const std::string& msg)
    : std::runtime_error(where(l, k) + ": " + msg), line(l), key(std::move(k))
{
}

Grid RunConfig::grid() const
{
    return Grid::make(n_grid, grid_offset, static_cast<int>(std::floor(n_grid * dealias_fraction)));
}

void RunConfig::check() const
{
    auto bad = [](const std::string& key, const std::string& msg) { throw ConfigError(0, key, msg); };
    if (n_grid < 16 || n_grid % 2 != 0) bad("n_grid", "must be an even integer >= 16");
    if (!(grid_offset > 0.0 && grid_offset < 1.0)) bad("grid_offset", "must lie in (0, 1)");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 0.5)) bad("dealias_fraction", "must lie in (0, 1/2]");
    if (!(g >= 0.0)) bad("g", "gravity must be nonnegative");
    if (output_every < 1) bad("output.every", "must be >= 1");
    if (checkpoint_every < 0) bad("checkpoint.every", "must be >= 0");
    if (verify_tol < 0.0) bad("verify.tol", "must be >= 0");
    if (!(scale_time >= 0.0)) bad("scale.time", "must be >= 0");
    try {
        ctrl.check();
    } catch (const InvalidInput& e) {
        bad("", e.what());
    }
    const bool line = mode == Mode::Line;
    if (line && (init == InitKind::Trivial || init == InitKind::Smooth || init == InitKind::Crest
                 || init == InitKind::Random))
        bad("init.kind", "this initial state is defined for the disc only");
    if (!line && init == InitKind::LineWave) bad("init.kind", "line_wave needs mode = line");
    if (init == InitKind::Checkpoint && checkpoint_in.empty()) bad("init.path", "checkpoint path required");
}

RunConfig parse_config(const std::string& text)
{
    RunConfig r;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "", "missing key");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(line, key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(line, key, "duplicate key");
        if (value.empty()) throw ConfigError(line, key, "missing value");
        it->second(r, Ctx{line, key, value});
    }
    r.check();
    return r;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

double identity_tolerance(int n)
{
    if (n >= 128) return 1e-8;
    if (n >= 64) return 1e-6;
    return 1e-2;
}

}  // namespace ww
