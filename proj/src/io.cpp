#include "curverec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curverec/errors.hpp"

namespace curverec {

namespace {

void dump_number(std::string& out, double x) {
    if (!std::isfinite(x)) throw FormatError("non-finite number cannot be serialized");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    const std::string s(buf);
    out += s;
    // Keep a float recognizable as such after a round trip.
    if (s.find_first_of(".e") == std::string::npos) out += ".0";
}

void dump_value(std::string& out, const Json& j, int indent) {
    const std::string pad(2 * (indent + 1), ' ');
    const std::string close(2 * indent, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(key).dump() + ": ";
                dump_value(out, value, indent + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const Json& e : j) {
                if (!first) out += flat ? ", " : ",\n";
                first = false;
                if (!flat) out += pad;
                dump_value(out, e, indent + 1);
            }
            out += flat ? "]" : "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            dump_number(out, j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return j.at(key);
}

double num(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) throw FormatError(std::string("field '") + key + "' is not a number");
    return v.get<double>();
}

long long integer(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw FormatError(std::string("field '") + key + "' is not an integer");
    return v.get<long long>();
}

const Json& array(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_array()) throw FormatError(std::string("field '") + key + "' is not an array");
    return v;
}

std::string text(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) throw FormatError(std::string("field '") + key + "' is not a string");
    return v.get<std::string>();
}

void check_version(const Json& j) {
    if (integer(j, "v") != kSchemaVersion) throw FormatError("unsupported schema version");
}

Json vec(const Vec2& p) { return Json::array({p.x(), p.y()}); }
Json vec(const Vec3& p) { return Json::array({p.x(), p.y(), p.z()}); }

template <int N>
Eigen::Matrix<double, N, 1> to_vec(const Json& j) {
    if (!j.is_array() || static_cast<int>(j.size()) != N) throw FormatError("expected a " + std::to_string(N) + "-vector");
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) {
        if (!j[i].is_number()) throw FormatError("vector entry is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

Vec2 vec2(const Json& j, const char* key) { return to_vec<2>(field(j, key)); }

Json params_to_json(const CurveParams& p) {
    return Json{{"c", p.c}, {"alpha", p.alpha}, {"beta", p.beta}, {"phi", p.phi}};
}

CurveParams params_from_json(const Json& j) {
    return {num(j, "c"), num(j, "alpha"), num(j, "beta"), num(j, "phi")};
}

Json line_to_json(const Line2& l) { return Json::array({vec(l.point), vec(l.direction)}); }

Line2 line_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("a line is [point, dir]");
    return {to_vec<2>(j[0]), to_vec<2>(j[1])};
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    dump_value(out, j, 0);
    out += "\n";
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON");
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
}

void write_json_file(const std::string& path, const Json& j) { write_text_file(path, dump_json(j)); }

Json scene_to_json(const Scene& scene) {
    Json motion = Json::array();
    for (const FrameMotion& m : scene.motion.frames)
        motion.push_back({{"delta", m.delta}, {"tau", m.tau}, {"inplane_rot", m.inplane_rot},
                          {"inplane_shift", vec(m.inplane_shift)}});
    return Json{{"v", kSchemaVersion},
                {"seed", scene.seed},
                {"params", params_to_json(scene.params)},
                {"motion", motion},
                {"samples_per_curve", scene.samples_per_curve}};
}

Scene scene_from_json(const Json& j) {
    check_version(j);
    Scene s;
    const Json& seed = field(j, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        throw FormatError("field 'seed' is not a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
    s.params = params_from_json(field(j, "params"));
    for (const Json& m : array(j, "motion"))
        s.motion.frames.push_back({num(m, "delta"), num(m, "tau"), num(m, "inplane_rot"), vec2(m, "inplane_shift")});
    s.samples_per_curve = static_cast<int>(integer(j, "samples_per_curve"));
    validate_params(s.params);
    s.curve = scene_curve(s);
    return s;
}

Json frames_to_json(const std::vector<FrameImage>& frames) {
    Json out = Json::array();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const FrameImage& f = frames[i];
        Json curve = Json::array();
        for (const Vec2& p : f.projected_samples) curve.push_back(vec(p));
        out.push_back({{"index", i},
                       {"A", vec(f.A_proj)},
                       {"B", vec(f.B_proj)},
                       {"tanA_dir", vec(f.tangent_dir_at_A_proj)},
                       {"tanB_dir", vec(f.tangent_dir_at_B_proj)},
                       {"curve", curve}});
    }
    return Json{{"v", kSchemaVersion}, {"frames", out}};
}

std::vector<FrameImage> frames_from_json(const Json& j) {
    check_version(j);
    std::vector<FrameImage> out;
    for (const Json& f : array(j, "frames")) {
        FrameImage img;
        img.A_proj = vec2(f, "A");
        img.B_proj = vec2(f, "B");
        img.tangent_dir_at_A_proj = vec2(f, "tanA_dir");
        img.tangent_dir_at_B_proj = vec2(f, "tanB_dir");
        for (const Json& p : array(f, "curve")) img.projected_samples.push_back(to_vec<2>(p));
        out.push_back(std::move(img));
    }
    return out;
}

Json observations_to_json(const std::vector<FrameObservation>& obs) {
    Json out = Json::array();
    for (const FrameObservation& o : obs)
        out.push_back({{"index", o.frame_index}, {"c_prime", o.c_prime}, {"d_prime", o.d_prime}, {"e_prime", o.e_prime}});
    return Json{{"v", kSchemaVersion}, {"observations", out}};
}

std::vector<FrameObservation> observations_from_json(const Json& j) {
    check_version(j);
    std::vector<FrameObservation> out;
    for (const Json& o : array(j, "observations")) {
        FrameObservation f;
        f.frame_index = static_cast<int>(integer(o, "index"));
        f.c_prime = num(o, "c_prime");
        f.d_prime = num(o, "d_prime");
        f.e_prime = num(o, "e_prime");
        out.push_back(f);
    }
    return out;
}

Json solution_to_json(const SolveReport& report) {
    Json frames = Json::array();
    for (const FramePose& p : report.per_frame)
        frames.push_back({{"index", p.frame_index}, {"delta", p.delta}, {"tau", p.tau}, {"branch", to_string(p.delta_branch)}});
    return Json{{"v", kSchemaVersion},
                {"method", to_string(report.method)},
                {"params", params_to_json(report.params)},
                {"residual_rms", report.residual_rms},
                {"converged", report.converged},
                {"per_frame", frames}};
}

SolveReport solution_from_json(const Json& j) {
    check_version(j);
    SolveReport r;
    try {
        r.method = method_from_string(text(j, "method"));
    } catch (const RangeError& e) {
        throw FormatError(e.what());
    }
    r.params = params_from_json(field(j, "params"));
    r.residual_rms = num(j, "residual_rms");
    if (j.contains("converged")) {
        if (!j.at("converged").is_boolean()) throw FormatError("field 'converged' is not a boolean");
        r.converged = j.at("converged").get<bool>();
    }
    for (const Json& f : array(j, "per_frame")) {
        FramePose p;
        p.frame_index = static_cast<int>(integer(f, "index"));
        p.delta = num(f, "delta");
        p.tau = num(f, "tau");
        const std::string b = text(f, "branch");
        if (b != "plus" && b != "minus") throw FormatError("unknown branch '" + b + "'");
        p.delta_branch = b == "plus" ? Branch::plus : Branch::minus;
        r.per_frame.push_back(p);
    }
    return r;
}

Json curve3d_to_json(const ReconstructedCurve& curve) {
    Json pts = Json::array();
    for (const Vec3& p : curve.points) pts.push_back(vec(p));
    return Json{{"v", kSchemaVersion}, {"mirror_flag", to_string(curve.mirror_flag)}, {"points", pts}};
}

ReconstructedCurve curve3d_from_json(const Json& j) {
    check_version(j);
    ReconstructedCurve c;
    try {
        c.mirror_flag = mirror_flag_from_string(text(j, "mirror_flag"));
    } catch (const RangeError& e) {
        throw FormatError(e.what());
    }
    int i = 0;
    for (const Json& p : array(j, "points")) {
        c.points.push_back(to_vec<3>(p));
        c.source_image_indices.push_back(i++);
    }
    return c;
}

Json pairs_to_json(const std::vector<CorrespondencePair>& pairs) {
    Json out = Json::array();
    for (const CorrespondencePair& p : pairs) out.push_back({{"i", p.index}, {"x1", vec(p.x1)}, {"x2", vec(p.x2)}});
    return Json{{"v", kSchemaVersion}, {"pairs", out}};
}

std::vector<CorrespondencePair> pairs_from_json(const Json& j) {
    check_version(j);
    std::vector<CorrespondencePair> out;
    for (const Json& p : array(j, "pairs"))
        out.push_back({static_cast<int>(integer(p, "i")), vec2(p, "x1"), vec2(p, "x2")});
    return out;
}

Json view_to_json(const PlanarSceneView& view) {
    Json curve = Json::array();
    for (const Vec2& p : view.curve_image) curve.push_back(vec(p));
    return Json{{"A", vec(view.A)},
                {"B", vec(view.B)},
                {"C", vec(view.C)},
                {"tangent_at_A", line_to_json(view.tangent_line_at_A)},
                {"tangent_at_B", line_to_json(view.tangent_line_at_B)},
                {"curve", curve}};
}

PlanarSceneView view_from_json(const Json& j) {
    PlanarSceneView v;
    v.A = vec2(j, "A");
    v.B = vec2(j, "B");
    v.C = vec2(j, "C");
    v.tangent_line_at_A = line_from_json(field(j, "tangent_at_A"));
    v.tangent_line_at_B = line_from_json(field(j, "tangent_at_B"));
    for (const Json& p : array(j, "curve")) v.curve_image.push_back(to_vec<2>(p));
    return v;
}

Json views_to_json(const PlanarSceneView& view1, const PlanarSceneView& view2) {
    return Json{{"v", kSchemaVersion}, {"views", Json::array({view_to_json(view1), view_to_json(view2)})}};
}

std::pair<PlanarSceneView, PlanarSceneView> views_from_json(const Json& j) {
    check_version(j);
    const Json& views = array(j, "views");
    if (views.size() != 2) throw FormatError("expected exactly two views");
    return {view_from_json(views[0]), view_from_json(views[1])};
}

}  // namespace curverec
