#include "sttr/scenario_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace sttr {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw ConfigError(key, "expected a number, got '" + t + "'");
    return v;
}

long long to_integer(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw ConfigError(key, "expected an integer, got '" + t + "'");
    return v;
}

Vec3 to_vec3(const std::string& key, std::string_view text) {
    const auto items = split_list(text);
    if (items.size() != 3) throw ConfigError(key, "expected three comma-separated numbers");
    return {to_double(key, items[0]), to_double(key, items[1]), to_double(key, items[2])};
}

bool to_bool(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key, "expected a boolean, got '" + t + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vec3(const Vec3& v) { return fmt_double(v.x()) + ", " + fmt_double(v.y()) + ", " + fmt_double(v.z()); }

struct Setting {
    std::string_view section;
    std::string_view key;
    std::function<void(ScenarioConfig&, const std::string& full_key, std::string_view)> set;
    std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

template <class Member>
Setting number(std::string_view section, std::string_view key, Member member) {
    return {section, key,
            [member](ScenarioConfig& c, const std::string& k, std::string_view v) { std::invoke(member, c) = to_double(k, v); },
            [member](const ScenarioConfig& c) { return std::optional<std::string>(fmt_double(std::invoke(member, c))); }};
}

template <class Accessor>
Setting param(std::string_view section, std::string_view key, Accessor accessor) {
    return {section, key,
            [accessor](ScenarioConfig& c, const std::string& k, std::string_view v) { accessor(c) = to_double(k, v); },
            [accessor](const ScenarioConfig& c) { return std::optional<std::string>(fmt_double(accessor(c))); }};
}

void add_sttr_block(std::vector<Setting>& s, std::string_view section, SttrParams EstimatorParams::*block) {
    auto field = [&](std::string_view key, double SttrParams::*f) {
        s.push_back(param(section, key, [block, f](auto& c) -> auto& { return (c.params.*block).*f; }));
    };
    field("c1", &SttrParams::c1);
    field("c2", &SttrParams::c2);
    field("gamma1", &SttrParams::gamma1);
    field("gamma2", &SttrParams::gamma2);
    field("alpha", &SttrParams::alpha);
    field("beta", &SttrParams::beta);
    field("zeta", &SttrParams::zeta);
    field("m0", &SttrParams::m0);
}

void add_kalman_block(std::vector<Setting>& s, std::string_view section, KalmanParams EstimatorParams::*block) {
    auto field = [&](std::string_view key, double KalmanParams::*f) {
        s.push_back(param(section, key, [block, f](auto& c) -> auto& { return (c.params.*block).*f; }));
    };
    field("r_g", &KalmanParams::r_g);
    field("r_h", &KalmanParams::r_h);
    field("q", &KalmanParams::q);
    field("zeta", &KalmanParams::zeta);
    field("p0", &KalmanParams::p0);
}

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table = [] {
        std::vector<Setting> s;
        s.push_back({"scenario", "seed",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         const auto n = to_integer(k, v);
                         if (n < 0) throw ConfigError(k, "must be nonnegative");
                         c.seed = static_cast<std::uint64_t>(n);
                     },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(std::to_string(c.seed)); }});
        s.push_back(number("scenario", "dt", &ScenarioConfig::dt));
        s.push_back(number("scenario", "duration", &ScenarioConfig::duration));
        s.push_back({"scenario", "trajectory",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == "eight") c.trajectory = TrajectoryKind::eight;
                         else if (t == "square") c.trajectory = TrajectoryKind::square;
                         else if (t == "constant") c.trajectory = TrajectoryKind::constant;
                         else throw ConfigError(k, "expected eight | square | constant");
                     },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(to_string(c.trajectory)); }});
        s.push_back({"scenario", "target_start",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         if (trim(v) == "auto") c.target_start.reset();
                         else c.target_start = to_vec3(k, v);
                     },
                     [](const ScenarioConfig& c) {
                         return std::optional<std::string>(c.target_start ? fmt_vec3(*c.target_start) : "auto");
                     }});
        s.push_back({"scenario", "constant_velocity",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.constant_velocity = to_vec3(k, v); },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(fmt_vec3(c.constant_velocity)); }});
        s.push_back(number("scenario", "square_speed", &ScenarioConfig::square_speed));
        s.push_back(number("scenario", "square_leg", &ScenarioConfig::square_leg));
        s.push_back({"scenario", "estimators",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         c.estimators.clear();
                         for (const auto& name : split_list(v)) {
                             const auto kind = parse_estimator_kind(name);
                             if (!kind) throw ConfigError(k, "unknown estimator '" + name + "'");
                             c.estimators.push_back(*kind);
                         }
                     },
                     [](const ScenarioConfig& c) {
                         std::string out;
                         for (auto k : c.estimators) out += (out.empty() ? "" : ", ") + std::string(to_string(k));
                         return std::optional<std::string>(out);
                     }});
        s.push_back({"scenario", "noise_path",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == "angular") c.noise_path = NoisePath::angular;
                         else if (t == "pixel") c.noise_path = NoisePath::pixel;
                         else throw ConfigError(k, "expected angular | pixel");
                     },
                     [](const ScenarioConfig& c) {
                         return std::optional<std::string>(c.noise_path == NoisePath::angular ? "angular" : "pixel");
                     }});
        s.push_back({"scenario", "steady_state_start",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         if (trim(v) == "auto") c.steady_state_start.reset();
                         else c.steady_state_start = to_double(k, v);
                     },
                     [](const ScenarioConfig& c) {
                         return std::optional<std::string>(c.steady_state_start ? fmt_double(*c.steady_state_start) : "auto");
                     }});
        s.push_back(number("scenario", "max_lag", &ScenarioConfig::max_lag));
        s.push_back({"scenario", "record_observability",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.record_observability = to_bool(k, v); },
                     [](const ScenarioConfig& c) {
                         return std::optional<std::string>(c.record_observability ? "true" : "false");
                     }});

        s.push_back({"observers", "count",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.n_observers = static_cast<int>(to_integer(k, v)); },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(std::to_string(c.n_observers)); }});
        s.push_back({"observers", "neighbors",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.neighbors = static_cast<int>(to_integer(k, v)); },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(std::to_string(c.neighbors)); }});
        s.push_back({"observers", "box",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.box = to_vec3(k, v); },
                     [](const ScenarioConfig& c) { return std::optional<std::string>(fmt_vec3(c.box)); }});
        s.push_back(number("observers", "radius_min", &ScenarioConfig::radius_min));
        s.push_back(number("observers", "radius_max", &ScenarioConfig::radius_max));
        s.push_back(number("observers", "rate_min", &ScenarioConfig::rate_min));
        s.push_back(number("observers", "rate_max", &ScenarioConfig::rate_max));
        s.push_back({"observers", "pointing",
                     [](ScenarioConfig& c, const std::string& k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == "track") c.pointing = CameraPointing::track;
                         else if (t == "fixed") c.pointing = CameraPointing::fixed;
                         else throw ConfigError(k, "expected track | fixed");
                     },
                     [](const ScenarioConfig& c) {
                         return std::optional<std::string>(c.pointing == CameraPointing::track ? "track" : "fixed");
                     }});

        s.push_back(number("noise", "sigma_g_deg", &ScenarioConfig::sigma_g_deg));
        s.push_back(number("noise", "sigma_hc_deg_s", &ScenarioConfig::sigma_hc_deg_s));
        s.push_back(number("noise", "sigma_omega_deg_s", &ScenarioConfig::sigma_omega_deg_s));

        s.push_back(number("camera", "focal_px", &ScenarioConfig::focal_px));
        s.push_back(number("camera", "cx", &ScenarioConfig::cx));
        s.push_back(number("camera", "cy", &ScenarioConfig::cy));

        add_sttr_block(s, "sttr", &EstimatorParams::sttr);
        add_sttr_block(s, "stt", &EstimatorParams::stt);
        add_kalman_block(s, "ckf", &EstimatorParams::ckf);
        add_kalman_block(s, "cikf", &EstimatorParams::cikf);
        add_kalman_block(s, "cmkf", &EstimatorParams::cmkf);
        return s;
    }();
    return table;
}

}  // namespace

std::string_view to_string(TrajectoryKind kind) {
    switch (kind) {
        case TrajectoryKind::eight: return "eight";
        case TrajectoryKind::square: return "square";
        case TrajectoryKind::constant: return "constant";
    }
    return "unknown";
}

int ScenarioConfig::steps() const { return static_cast<int>(std::llround(duration / dt)); }

AngularNoise ScenarioConfig::angular_noise() const {
    return {sigma_g_deg * kDeg, sigma_hc_deg_s * kDeg, sigma_omega_deg_s * kDeg};
}

PixelNoise ScenarioConfig::pixel_noise() const {
    // Per-axis pixel noise whose small-angle equivalent matches the angular stds.
    return {focal_px * sigma_g_deg * kDeg, focal_px * sigma_hc_deg_s * kDeg};
}

PinholeIntrinsics ScenarioConfig::intrinsics() const { return PinholeIntrinsics::from_focal(focal_px, cx, cy); }

Vec3 ScenarioConfig::default_target_start() const {
    const Vec3 center = 0.5 * box;
    switch (trajectory) {
        case TrajectoryKind::eight:
            // x spans [x0 - 200/pi, x0] over one period
            return center + Vec3(100.0 / std::numbers::pi, 0.0, 0.0);
        case TrajectoryKind::square:
            return center - 0.5 * square_speed * square_leg * Vec3(1.0, 1.0, 0.0);
        case TrajectoryKind::constant:
            return center - 0.5 * duration * constant_velocity;
    }
    return center;
}

EstimatorParams ScenarioConfig::effective_params() const {
    EstimatorParams p = params;
    const AngularNoise n = angular_noise();
    for (KalmanParams* k : {&p.ckf, &p.cikf, &p.cmkf}) {
        k->sigma_g = n.sigma_g;
        k->sigma_h = n.sigma_h;
    }
    return p;
}

void ScenarioConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("scenario.dt", "must be positive");
    if (!(duration > 0.0)) throw ConfigError("scenario.duration", "must be positive");
    if (steps() < 1) throw ConfigError("scenario.duration", "must cover at least one step");
    if (n_observers < 1) throw ConfigError("observers.count", "must be at least 1");
    if (neighbors < 0) throw ConfigError("observers.neighbors", "must be nonnegative");
    if (neighbors >= n_observers) throw ConfigError("observers.neighbors", "must be smaller than observers.count");
    if ((box.array() <= 0.0).any()) throw ConfigError("observers.box", "dimensions must be positive");
    if (!(radius_min > 0.0) || radius_max < radius_min) throw ConfigError("observers.radius_min", "need 0 < radius_min <= radius_max");
    if (rate_max < rate_min) throw ConfigError("observers.rate_min", "need rate_min <= rate_max");
    if (sigma_g_deg < 0.0) throw ConfigError("noise.sigma_g_deg", "must be nonnegative");
    if (sigma_hc_deg_s < 0.0) throw ConfigError("noise.sigma_hc_deg_s", "must be nonnegative");
    if (sigma_omega_deg_s < 0.0) throw ConfigError("noise.sigma_omega_deg_s", "must be nonnegative");
    if (!(focal_px > 0.0)) throw ConfigError("camera.focal_px", "must be positive");
    if (trajectory == TrajectoryKind::square && (!(square_speed >= 0.0) || !(square_leg > 0.0)))
        throw ConfigError("scenario.square_leg", "need square_speed >= 0 and square_leg > 0");
    if (noise_path == NoisePath::pixel && pointing != CameraPointing::track)
        throw ConfigError("observers.pointing", "the pixel noise path needs track pointing to keep the target in view");
    if (estimators.empty()) throw ConfigError("scenario.estimators", "select at least one estimator");
    const double ss = steady_state_start_or_default();
    if (ss < 0.0 || ss >= duration) throw ConfigError("scenario.steady_state_start", "must lie in [0, duration)");
    if (max_lag < 0.0) throw ConfigError("scenario.max_lag", "must be nonnegative");

    const EstimatorParams p = effective_params();
    auto check = [](const char* section, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(section) + "." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
        }
    };
    for (auto kind : estimators) {
        switch (kind) {
            case EstimatorKind::sttr: check("sttr", [&] { p.sttr.validate(); }); break;
            case EstimatorKind::stt: check("stt", [&] { p.stt.validate(); }); break;
            case EstimatorKind::ckf: check("ckf", [&] { p.ckf.validate(); }); break;
            case EstimatorKind::cikf: check("cikf", [&] { p.cikf.validate(); }); break;
            case EstimatorKind::cmkf: check("cmkf", [&] { p.cmkf.validate(); }); break;
        }
    }
    for (auto [kind, zeta] : {std::pair{EstimatorKind::sttr, p.sttr.zeta}, std::pair{EstimatorKind::stt, p.stt.zeta},
                              std::pair{EstimatorKind::cikf, p.cikf.zeta}, std::pair{EstimatorKind::cmkf, p.cmkf.zeta}}) {
        if (std::find(estimators.begin(), estimators.end(), kind) == estimators.end()) continue;
        if (neighbors * zeta > 1.0 + 1e-12)
            throw ConfigError(std::string(to_string(kind)) + ".zeta", "neighbors * zeta exceeds 1");
    }
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value) {
    const auto dot = key.find('.');
    if (dot == std::string_view::npos) throw ConfigError(std::string(key), "expected section.key");
    const auto section = key.substr(0, dot);
    const auto name = key.substr(dot + 1);
    for (const auto& s : settings()) {
        if (s.section == section && s.key == name) {
            s.set(config, std::string(key), value);
            return;
        }
    }
    throw ConfigError(std::string(key), "unknown setting");
}

ScenarioConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    ScenarioConfig config;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(section, "setting outside of a [section]");
        for (const auto& [key, value] : body) apply_setting(config, section + "." + key, value.data());
    }
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ScenarioConfig& config) {
    std::string out;
    std::string_view current;
    for (const auto& s : settings()) {
        if (s.section != current) {
            out += (out.empty() ? "[" : "\n[") + std::string(s.section) + "]\n";
            current = s.section;
        }
        if (const auto v = s.get(config)) out += std::string(s.key) + " = " + *v + "\n";
    }
    return out;
}

}  // namespace sttr
