#include "sttr/measurement.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace sttr {

std::string_view to_string(MeasurementKind kind) {
    return kind == MeasurementKind::bearing ? "bearing" : "rate";
}

PseudoLinearMeasurement pseudo_bearing(const UnitBearing& g_tilde, const Vec3& observer_pos) {
    const Mat3 p = projector(g_tilde);
    PseudoLinearMeasurement m;
    m.kind = MeasurementKind::bearing;
    m.z = p * observer_pos;
    m.H.leftCols<3>() = p;
    m.H.rightCols<3>().setZero();
    return m;
}

PseudoLinearMeasurement pseudo_rate(const UnitBearing& g_tilde, const Vec3& h_tilde, const Vec3& observer_pos,
                                    const Vec3& observer_vel) {
    const Mat3 p = projector(g_tilde);
    const Mat3 hg = h_tilde * g_tilde.vec().transpose();
    PseudoLinearMeasurement m;
    m.kind = MeasurementKind::rate;
    m.z = -hg * observer_pos + p * observer_vel;
    m.H.leftCols<3>() = -hg;
    m.H.rightCols<3>() = p;
    return m;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out += buf;
}

}  // namespace

std::string serialize(const PseudoLinearMeasurement& m) {
    std::string out(to_string(m.kind));
    out += ',' + std::to_string(m.observer_id);
    append_double(out, m.timestamp);
    for (int i = 0; i < 3; ++i) append_double(out, m.z[i]);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c) append_double(out, m.H(r, c));
    return out;
}

PseudoLinearMeasurement parse_measurement(std::string_view record) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = record.find(',', start);
        fields.push_back(record.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (fields.size() != 24) throw std::invalid_argument("parse_measurement: expected 24 fields");

    PseudoLinearMeasurement m;
    if (fields[0] == "bearing") m.kind = MeasurementKind::bearing;
    else if (fields[0] == "rate") m.kind = MeasurementKind::rate;
    else throw std::invalid_argument("parse_measurement: unknown kind '" + std::string(fields[0]) + "'");

    auto parse_number = [](std::string_view f, auto& out) {
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
        if (ec != std::errc() || ptr != f.data() + f.size())
            throw std::invalid_argument("parse_measurement: bad number '" + std::string(f) + "'");
    };
    parse_number(fields[1], m.observer_id);
    parse_number(fields[2], m.timestamp);
    for (int i = 0; i < 3; ++i) parse_number(fields[3 + i], m.z[i]);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c) parse_number(fields[6 + r * 6 + c], m.H(r, c));
    return m;
}

}  // namespace sttr
