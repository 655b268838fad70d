#include "artopen/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "artopen/error.hpp"
#include "artopen/synthetic.hpp"

namespace artopen {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::Schema, msg); }

/// Strict view of a JSON object: every key must be consumed before finish().
class Obj {
 public:
  Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) schema(path_ + ": expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k) && !j_.at(k).is_null(); }

  const Json& raw(const std::string& k) {
    used_.insert(k);
    if (!j_.contains(k)) schema(where(k) + ": required");
    return j_.at(k);
  }
  const Json* opt(const std::string& k) {
    used_.insert(k);
    return has(k) ? &j_.at(k) : nullptr;
  }

  double num(const std::string& k) {
    const Json& v = raw(k);
    if (!v.is_number()) schema(where(k) + ": expected a number");
    return v.get<double>();
  }
  double num(const std::string& k, double def) { return opt(k) ? num(k) : def; }
  double positive(const std::string& k, double def) {
    const double v = num(k, def);
    if (!(v > 0.0)) schema(where(k) + ": must be > 0");
    return v;
  }
  int integer(const std::string& k, int def) {
    const Json* v = opt(k);
    if (!v) return def;
    if (!v->is_number_integer()) schema(where(k) + ": expected an integer");
    return v->get<int>();
  }
  std::uint64_t u64(const std::string& k, std::uint64_t def) {
    const Json* v = opt(k);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
      schema(where(k) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }
  bool boolean(const std::string& k, bool def) {
    const Json* v = opt(k);
    if (!v) return def;
    if (!v->is_boolean()) schema(where(k) + ": expected true or false");
    return v->get<bool>();
  }
  std::string str(const std::string& k) {
    const Json& v = raw(k);
    if (!v.is_string()) schema(where(k) + ": expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& k, const std::string& def) { return opt(k) ? str(k) : def; }

  std::vector<double> list(const std::string& k, std::size_t n = 0) {
    const Json& v = raw(k);
    if (!v.is_array()) schema(where(k) + ": expected an array");
    if (n && v.size() != n) schema(where(k) + ": expected " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) schema(where(k) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  Vec3 vec3(const std::string& k) {
    const auto v = list(k, 3);
    return {v[0], v[1], v[2]};
  }
  Vec3 vec3(const std::string& k, const Vec3& def) { return opt(k) ? vec3(k) : def; }
  Vec2 vec2(const std::string& k) {
    const auto v = list(k, 2);
    return {v[0], v[1]};
  }
  JointRange range(const std::string& k, const JointRange& def, double scale = 1.0) {
    if (!opt(k)) return def;
    const auto v = list(k, 2);
    return {v[0] * scale, v[1] * scale};
  }
  Obj child(const std::string& k) { return Obj(raw(k), where(k)); }
  std::string where(const std::string& k) const { return path_ + "." + k; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) schema(path_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Json arr(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json quat_json(const Quat& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }
Quat quat_from(const std::vector<double>& v) {
  Quat q(v[0], v[1], v[2], v[3]);
  if (q.norm() < 1e-12) schema("quaternion has zero norm");
  return q.normalized();
}

Json pose_json(const Pose& p) {
  return {{"translation", arr(p.translation)}, {"quaternion_wxyz", quat_json(p.rotation)}};
}
Pose pose_from(Obj o) {
  Pose p;
  p.translation = o.vec3("translation");
  p.rotation = quat_from(o.list("quaternion_wxyz", 4));
  o.finish();
  return p;
}

Vec3 unit(const Vec3& v, const std::string& what) {
  if (!(v.norm() > 1e-9)) schema(what + ": zero-length direction");
  return v.normalized();
}

/// Parses the shared articulation keys; any other keys are left for the caller.
ArticulationParams params_from(Obj& o) {
  const ArticulationType type = [&] {
    try {
      return parse_articulation_type(o.str("type"));
    } catch (const Error& e) {
      schema(o.where("type") + ": " + e.what());
    }
  }();
  const Vec3 handle = o.vec3("handle");
  const Vec3 normal = unit(o.vec3("normal"), o.where("normal"));
  HandleOrientation orient = HandleOrientation::Horizontal;
  if (o.opt("handle_orientation")) {
    try {
      orient = parse_handle_orientation(o.str("handle_orientation"));
    } catch (const Error& e) {
      schema(o.where("handle_orientation") + ": " + e.what());
    }
  }
  const bool has_radius = o.opt("radius") != nullptr;
  const double radius = has_radius ? o.positive("radius", 1.0) : 0.0;

  if (type == ArticulationType::Drawer) {
    if (o.opt("axis") || has_radius) schema(o.where("type") + ": drawers take no axis or radius");
    return make_drawer(handle, normal, orient);
  }
  if (o.opt("axis")) {
    Obj a = o.child("axis");
    ArticulationParams p;
    p.atype = type;
    p.handle = handle;
    p.normal = normal;
    p.handle_orientation = orient;
    p.axis = HingeAxis{a.vec3("point"), unit(a.vec3("direction"), a.where("direction"))};
    a.finish();
    const Vec3 d = handle - p.axis->point;
    const double dist = (d - d.dot(p.axis->direction) * p.axis->direction).norm();
    if (!(dist > 1e-9)) schema(o.where("axis") + ": handle lies on the hinge axis");
    p.radius = dist;
    if (has_radius) p.radius = radius;
    return p;
  }
  if (!has_radius) schema(o.where("type") + ": hinged objects need radius or axis");
  return make_hinged(type, handle, normal, radius, orient);
}

ObjectGeometry geometry_from(Obj o) {
  ObjectGeometry g;
  g.panel_width = o.positive("panel_width", g.panel_width);
  g.panel_height = o.positive("panel_height", g.panel_height);
  g.edge_margin = o.num("edge_margin", g.edge_margin);
  g.handle_offset = o.num("handle_offset", g.handle_offset);
  g.panel_thickness = o.positive("panel_thickness", g.panel_thickness);
  g.body_depth = o.positive("body_depth", g.body_depth);
  g.drawer_depth = o.positive("drawer_depth", g.drawer_depth);
  g.frame_margin = o.num("frame_margin", g.frame_margin);
  g.floor_standing = o.boolean("floor_standing", g.floor_standing);
  o.finish();
  return g;
}

KinematicModel robot_from(Obj o) {
  KinematicModel m;
  m.mast_offset = o.vec3("mast_offset", m.mast_offset);
  const std::string side = o.str("arm_side", m.arm_side < 0 ? "right" : "left");
  if (side != "right" && side != "left") schema(o.where("arm_side") + ": 'left' or 'right'");
  m.arm_side = side == "right" ? -1.0 : 1.0;
  m.arm_base_length = o.num("arm_base_length", m.arm_base_length);
  m.wrist_height = o.num("wrist_height", m.wrist_height);
  m.finger_length = o.positive("finger_length", m.finger_length);
  m.closure_shrink = o.positive("closure_shrink", m.closure_shrink);
  m.chassis_half = o.vec3("chassis_half", m.chassis_half);
  m.mast_half_width = o.positive("mast_half_width", m.mast_half_width);
  m.mast_height = o.positive("mast_height", m.mast_height);
  m.arm_half_width = o.positive("arm_half_width", m.arm_half_width);
  m.arm_half_height = o.positive("arm_half_height", m.arm_half_height);
  m.gripper_half_width = o.positive("gripper_half_width", m.gripper_half_width);
  m.gripper_half_height = o.positive("gripper_half_height", m.gripper_half_height);
  if (o.opt("limits")) {
    Obj l = o.child("limits");
    JointLimits& lim = m.limits;
    lim.base_yaw = l.range("base_yaw_deg", lim.base_yaw, kDeg);
    lim.lift = l.range("lift", lim.lift);
    lim.arm_ext = l.range("arm_ext", lim.arm_ext);
    lim.wrist_yaw = l.range("wrist_yaw_deg", lim.wrist_yaw, kDeg);
    lim.wrist_pitch = l.range("wrist_pitch_deg", lim.wrist_pitch, kDeg);
    lim.pitch_enabled = l.boolean("pitch_enabled", lim.pitch_enabled);
    l.finish();
  }
  o.finish();
  m.validate();
  return m;
}

std::vector<OrientedBox> obstacles_from(Obj o) {
  std::vector<OrientedBox> out;
  if (const Json* list = o.opt("obstacles")) {
    if (!list->is_array()) schema(o.where("obstacles") + ": expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      Obj b((*list)[i], o.where("obstacles") + "[" + std::to_string(i) + "]");
      OrientedBox box;
      box.center = b.vec3("center");
      box.half_extents = b.vec3("half_extents");
      if (!(box.half_extents.minCoeff() > 0.0)) schema(b.where("half_extents") + ": must be > 0");
      box.rotation = Quat(Eigen::AngleAxisd(b.num("yaw_deg", 0.0) * kDeg, Vec3::UnitZ()));
      b.finish();
      out.push_back(box);
    }
  }
  o.finish();
  return out;
}

Vec3 planar_offset(Obj& o, const std::string& k) {
  if (!o.opt(k)) return Vec3::Zero();
  const Vec3 v = o.vec3(k);
  return {v.x(), v.y(), v.z() * kDeg};
}

Experiment experiment_from(Obj o) {
  Experiment e;
  e.seed = o.u64("seed", e.seed);
  e.trials = o.integer("trials", e.trials);
  if (e.trials < 1) schema(o.where("trials") + ": must be >= 1");
  e.waypoints = o.integer("waypoints", e.waypoints);
  if (e.waypoints < 2) schema(o.where("waypoints") + ": must be >= 2");
  e.workers = o.integer("workers", e.workers);
  e.retries = o.integer("retries", e.retries);
  if (e.retries < 0) schema(o.where("retries") + ": must be >= 0");
  if (o.opt("grid")) {
    Obj g = o.child("grid");
    if (g.opt("origin")) e.grid.origin = g.vec2("origin");
    e.grid.spacing = g.positive("spacing", e.grid.spacing);
    e.grid.nx = g.integer("nx", e.grid.nx);
    e.grid.ny = g.integer("ny", e.grid.ny);
    if (e.grid.nx < 1 || e.grid.ny < 1) schema(g.where("nx") + ": grid needs nx, ny >= 1");
    if (g.opt("yaws_deg")) {
      e.grid.yaws.clear();
      for (double y : g.list("yaws_deg")) e.grid.yaws.push_back(wrap_angle(y * kDeg));
      if (e.grid.yaws.empty()) schema(g.where("yaws_deg") + ": needs at least one yaw");
    } else {
      const int n = g.integer("yaw_count", 8);
      if (n < 1) schema(g.where("yaw_count") + ": must be >= 1");
      e.grid.yaws = PlacementGrid::default_yaws(n);
    }
    g.finish();
  }
  if (const Json* nav = o.opt("navigation")) e.navigation = target_from_json(*nav);
  if (o.opt("grasp")) {
    Obj g = o.child("grasp");
    e.grasp.tolerance = g.positive("tolerance", e.grasp.tolerance);
    e.grasp.capture_depth = g.positive("capture_depth", e.grasp.capture_depth);
    g.finish();
  }
  if (o.opt("errors")) {
    Obj d = o.child("errors");
    e.errors.depth = d.num("depth", 0.0);
    e.errors.handle = d.vec3("handle", Vec3::Zero());
    e.errors.base = planar_offset(d, "base");
    d.finish();
  }
  if (o.opt("injection")) {
    Obj d = o.child("injection");
    e.injection.handle_offset = d.vec3("handle_offset", Vec3::Zero());
    e.injection.base_offset = planar_offset(d, "base_offset");
    d.finish();
  }
  if (o.opt("radius_deltas")) e.radius_deltas = o.list("radius_deltas");
  e.remine = o.boolean("remine", e.remine);
  e.contact_correction = o.boolean("contact_correction", e.contact_correction);
  e.replan_after_correction = o.boolean("replan_after_correction", e.replan_after_correction);
  o.finish();
  return e;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                               const std::string& header) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw Error(ErrorCode::Parse, "csv: expected header '" + header + "'");
  const std::size_t cols = split(header, ',').size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line, ',');
    if (row.size() != cols) throw Error(ErrorCode::Parse, "csv: wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "csv: bad number '" + s + "'");
  }
}

double opening_to_file(double v, ArticulationType t) { return is_hinged(t) ? v / kDeg : v; }
double opening_from_file(double v, ArticulationType t) { return is_hinged(t) ? v * kDeg : v; }

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t offset = 0;
};

PgmHeader parse_pgm_header(const std::vector<std::uint8_t>& b, const fs::path& path) {
  auto fail = [&](const std::string& m) -> PgmHeader {
    throw Error(ErrorCode::Parse, path.string() + ": " + m);
  };
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') return fail("not a binary PGM (P5)");
  std::size_t i = 2;
  auto next_int = [&]() {
    for (;;) {
      while (i < b.size() && std::isspace(b[i])) ++i;
      if (i < b.size() && b[i] == '#') {
        while (i < b.size() && b[i] != '\n') ++i;
        continue;
      }
      break;
    }
    if (i >= b.size() || !std::isdigit(b[i])) fail("malformed header");
    long v = 0;
    while (i < b.size() && std::isdigit(b[i])) {
      v = v * 10 + (b[i++] - '0');
      if (v > 1 << 20) fail("header value too large");
    }
    return int(v);
  };
  PgmHeader h;
  h.width = next_int();
  h.height = next_int();
  h.maxval = next_int();
  if (i >= b.size() || !std::isspace(b[i])) fail("malformed header");
  h.offset = i + 1;
  if (h.width < 1 || h.height < 1 || h.maxval < 1 || h.maxval > 65535) fail("bad dimensions");
  const std::size_t bytes = std::size_t(h.width) * h.height * (h.maxval > 255 ? 2 : 1);
  if (b.size() - h.offset < bytes) fail("truncated raster");
  return h;
}

void write_pgm(const fs::path& path, int w, int h, int maxval, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << "P5\n" << w << " " << h << "\n" << maxval << "\n";
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

DepthImage read_depth_pgm(const fs::path& path) {
  const auto b = read_bytes(path);
  const PgmHeader h = parse_pgm_header(b, path);
  if (h.maxval != 65535)
    throw Error(ErrorCode::Parse, path.string() + ": depth PGM must have maxval 65535");
  DepthImage d(h.width, h.height);
  for (std::size_t k = 0; k < d.data.size(); ++k)
    d.data[k] = std::uint16_t(b[h.offset + 2 * k] << 8 | b[h.offset + 2 * k + 1]);
  return d;
}

void write_depth_pgm(const fs::path& path, const DepthImage& d) {
  std::string data(d.data.size() * 2, '\0');
  for (std::size_t k = 0; k < d.data.size(); ++k) {
    data[2 * k] = char(d.data[k] >> 8);
    data[2 * k + 1] = char(d.data[k] & 0xff);
  }
  write_pgm(path, d.width, d.height, 65535, data);
}

Mask2D read_mask_pgm(const fs::path& path) {
  const auto b = read_bytes(path);
  const PgmHeader h = parse_pgm_header(b, path);
  if (h.maxval > 255) throw Error(ErrorCode::Parse, path.string() + ": mask PGM must be 8-bit");
  Mask2D m(h.width, h.height);
  for (std::size_t k = 0; k < m.bits.size(); ++k) m.bits[k] = b[h.offset + k] != 0 ? 1 : 0;
  return m;
}

void write_mask_pgm(const fs::path& path, const Mask2D& m) {
  std::string data(m.bits.size(), '\0');
  for (std::size_t k = 0; k < m.bits.size(); ++k) data[k] = m.bits[k] ? char(255) : char(0);
  write_pgm(path, m.width, m.height, 255, data);
}

void write_heatmap_pgm(const fs::path& path, const Heatmap& hm) {
  const auto& g = hm.grid;
  std::string data(hm.scores.size(), '\0');
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const int v = hm.waypoints > 0 ? int(std::lround(255.0 * hm.score(ix, iy) / hm.waypoints)) : 0;
      data[std::size_t(g.ny - 1 - iy) * g.nx + ix] = char(std::clamp(v, 0, 255));
    }
  write_pgm(path, g.nx, g.ny, 255, data);
}

std::string read_text(const fs::path& path) {
  const auto b = read_bytes(path);
  return {b.begin(), b.end()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, what + ": " + e.what());
  }
}

Json to_json(const ArticulationParams& p) {
  Json j = {{"type", std::string(to_string(p.atype))},
            {"handle", arr(p.handle)},
            {"normal", arr(p.normal)},
            {"handle_orientation", std::string(to_string(p.handle_orientation))}};
  if (p.axis) j["axis"] = {{"point", arr(p.axis->point)}, {"direction", arr(p.axis->direction)}};
  if (p.radius) j["radius"] = *p.radius;
  return j;
}

ArticulationParams params_from_json(const Json& j) {
  Obj o(j, "params");
  ArticulationParams p = params_from(o);
  o.finish();
  return p;
}

Json to_json(const CameraModel& c) {
  return {{"fx", c.fx},         {"fy", c.fy},         {"cx", c.cx},
          {"cy", c.cy},         {"width", c.width},   {"height", c.height},
          {"pose", pose_json(c.pose_in_base)}};
}

CameraModel camera_from_json(const Json& j) {
  Obj o(j, "camera");
  CameraModel c;
  c.fx = o.num("fx");
  c.fy = o.num("fy");
  c.cx = o.num("cx");
  c.cy = o.num("cy");
  c.width = o.integer("width", 0);
  c.height = o.integer("height", 0);
  if (o.opt("pose")) {
    c.pose_in_base = pose_from(o.child("pose"));
  } else if (o.opt("look_at")) {
    Obj l = o.child("look_at");
    const Vec3 eye = l.vec3("eye"), target = l.vec3("target");
    l.finish();
    if ((target - eye).norm() < 1e-9) schema("camera.look_at: eye equals target");
    c.pose_in_base = look_at(eye, target);
  } else {
    schema("camera: needs 'pose' or 'look_at'");
  }
  o.finish();
  try {
    c.validate();
  } catch (const Error& e) {
    schema(std::string("camera: ") + e.what());
  }
  return c;
}

Json to_json(const NavigationTarget& t) {
  return {{"x", t.x}, {"y", t.y}, {"yaw_deg", t.yaw / kDeg},
          {"ix", t.ix}, {"iy", t.iy}, {"score", t.score}};
}

NavigationTarget target_from_json(const Json& j) {
  Obj o(j, "navigation");
  NavigationTarget t;
  t.x = o.num("x");
  t.y = o.num("y");
  t.yaw = o.num("yaw_deg") * kDeg;
  t.ix = o.integer("ix", 0);
  t.iy = o.integer("iy", 0);
  t.score = o.integer("score", 0);
  o.finish();
  return t;
}

Json to_json(const ExecutionResult& r, ArticulationType type) {
  Json openings = Json::array();
  for (double v : r.openings) openings.push_back(opening_to_file(v, type));
  return {{"grasped", r.grasped},
          {"corrections", r.corrections},
          {"delta", pose_json(r.delta)},
          {"waypoints_executed", r.waypoints_executed},
          {"final_opening", opening_to_file(r.final_opening.opening, type)},
          {"opening_unit", is_hinged(type) ? "deg" : "m"},
          {"success", r.success},
          {"slip_step", r.slip_step ? Json(*r.slip_step) : Json(nullptr)},
          {"openings", openings}};
}

ExecutionResult execution_result_from_json(const Json& j, ArticulationType type) {
  Obj o(j, "result");
  ExecutionResult r;
  r.grasped = o.boolean("grasped", false);
  r.corrections = o.integer("corrections", 0);
  r.delta = pose_from(o.child("delta"));
  r.waypoints_executed = o.integer("waypoints_executed", 0);
  r.final_opening = {opening_from_file(o.num("final_opening"), type)};
  if (o.str("opening_unit") != (is_hinged(type) ? "deg" : "m"))
    schema("result.opening_unit: does not match the articulation type");
  r.success = o.boolean("success", false);
  if (o.opt("slip_step")) r.slip_step = o.integer("slip_step", 0);
  for (double v : o.list("openings")) r.openings.push_back(opening_from_file(v, type));
  o.finish();
  return r;
}

Json to_json(const TrialRecord& r, ArticulationType type) {
  return {{"handle_offset", arr(r.error.handle_offset)},
          {"base_offset", Json::array({r.error.base_offset.x(), r.error.base_offset.y(),
                                       r.error.base_offset.z() / kDeg})},
          {"planned", r.planned},
          {"replanned", r.replanned},
          {"failure", r.failure},
          {"result", to_json(r.result, type)}};
}

Json to_json(const Ablation& a, ArticulationType type, std::uint64_t seed) {
  auto arm = [&](const AblationArm& x) {
    return Json{{"successes", x.successes}, {"rate", x.rate()}, {"histogram", x.histogram}};
  };
  Json records = Json::array();
  for (std::size_t i = 0; i < a.with_correction.trials.size(); ++i)
    records.push_back({{"trial", i},
                       {"with_correction", to_json(a.with_correction.trials[i], type)},
                       {"without_correction", to_json(a.without_correction.trials[i], type)}});
  return {{"seed", seed},
          {"trials", a.with_correction.trials.size()},
          {"with_correction", arm(a.with_correction)},
          {"without_correction", arm(a.without_correction)},
          {"gap", a.with_correction.rate() - a.without_correction.rate()},
          {"records", records}};
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string plan_csv(const MotionPlan& plan) {
  std::string out = "base_x,base_y,base_yaw,lift,arm_ext,wrist_yaw,wrist_pitch,gripper\n";
  for (const auto& c : plan.configs) {
    for (double v : {c.base_xy.x(), c.base_xy.y(), c.base_yaw / kDeg, c.lift, c.arm_ext,
                     c.wrist_yaw / kDeg, c.wrist_pitch / kDeg})
      out += format_number(v) + ",";
    out += c.gripper == Gripper::Open ? "open\n" : "closed\n";
  }
  return out;
}

std::vector<RobotConfig> read_plan_csv(const std::string& text) {
  std::vector<RobotConfig> out;
  for (const auto& r :
       csv_rows(text, "base_x,base_y,base_yaw,lift,arm_ext,wrist_yaw,wrist_pitch,gripper")) {
    RobotConfig c;
    c.base_xy = {to_double(r[0]), to_double(r[1])};
    c.base_yaw = to_double(r[2]) * kDeg;
    c.lift = to_double(r[3]);
    c.arm_ext = to_double(r[4]);
    c.wrist_yaw = to_double(r[5]) * kDeg;
    c.wrist_pitch = to_double(r[6]) * kDeg;
    if (r[7] != "open" && r[7] != "closed") throw Error(ErrorCode::Parse, "csv: bad gripper state");
    c.gripper = r[7] == "open" ? Gripper::Open : Gripper::Closed;
    out.push_back(c);
  }
  return out;
}

std::string heatmap_csv(const Heatmap& hm) {
  std::string out = "ix,iy,x,y,best_yaw,score\n";
  for (int iy = 0; iy < hm.grid.ny; ++iy)
    for (int ix = 0; ix < hm.grid.nx; ++ix) {
      const Vec2 c = hm.grid.cell(ix, iy);
      out += std::to_string(ix) + "," + std::to_string(iy) + "," + format_number(c.x()) + "," +
             format_number(c.y()) + "," + format_number(hm.yaw(ix, iy) / kDeg) + "," +
             std::to_string(hm.score(ix, iy)) + "\n";
    }
  return out;
}

Heatmap read_heatmap_csv(const std::string& text, int waypoints) {
  const auto rows = csv_rows(text, "ix,iy,x,y,best_yaw,score");
  if (rows.empty()) throw Error(ErrorCode::EmptyHeatmap, "heatmap csv has no cells");
  Heatmap hm;
  hm.waypoints = waypoints;
  int nx = 0, ny = 0;
  for (const auto& r : rows) {
    nx = std::max(nx, std::stoi(r[0]) + 1);
    ny = std::max(ny, std::stoi(r[1]) + 1);
  }
  if (std::size_t(nx) * ny != rows.size()) throw Error(ErrorCode::Parse, "heatmap csv: ragged grid");
  hm.grid.nx = nx;
  hm.grid.ny = ny;
  hm.scores.assign(rows.size(), 0);
  hm.best_yaw.assign(rows.size(), 0.0);
  for (const auto& r : rows) {
    const int ix = std::stoi(r[0]), iy = std::stoi(r[1]);
    const std::size_t k = std::size_t(iy) * nx + ix;
    if (ix == 0 && iy == 0) hm.grid.origin = {to_double(r[2]), to_double(r[3])};
    if (ix == 1 && iy == 0) hm.grid.spacing = to_double(r[2]) - hm.grid.origin.x();
    if (nx == 1 && ix == 0 && iy == 1) hm.grid.spacing = to_double(r[3]) - hm.grid.origin.y();
    hm.best_yaw[k] = to_double(r[4]) * kDeg;
    hm.scores[k] = std::stoi(r[5]);
  }
  return hm;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep, ArticulationType type) {
  std::string out = "delta_radius,planned,executed,final_opening,slip_step,success\n";
  for (const auto& p : sweep)
    out += format_number(p.delta_radius) + "," + std::to_string(p.planned) + "," +
           std::to_string(p.result.waypoints_executed) + "," +
           format_number(opening_to_file(p.result.final_opening.opening, type)) + "," +
           (p.result.slip_step ? std::to_string(*p.result.slip_step) : "") + "," +
           (p.result.success ? "1" : "0") + "\n";
  return out;
}

std::string histogram_csv(const Ablation& a) {
  std::string out = "waypoints_executed,with_correction,without_correction\n";
  for (std::size_t k = 0; k < a.with_correction.histogram.size(); ++k)
    out += std::to_string(k) + "," + std::to_string(a.with_correction.histogram[k]) + "," +
           std::to_string(a.without_correction.histogram[k]) + "\n";
  return out;
}

DetectionRefs detection_from_json(const Json& j, const fs::path& base_dir) {
  Obj o(j, "detection");
  DetectionRefs d;
  if (o.opt("depth")) d.depth = base_dir / o.str("depth");
  if (o.opt("mask")) d.mask = base_dir / o.str("mask");
  if (const Json* cam = o.opt("camera")) {
    if (cam->is_string())
      d.camera = camera_from_json(parse_json(read_text(base_dir / cam->get<std::string>()),
                                             "camera " + cam->get<std::string>()));
    else
      d.camera = camera_from_json(*cam);
  }
  if (o.opt("handle_px")) d.handle_px = o.vec2("handle_px");
  if (o.opt("type")) {
    try {
      d.atype = parse_articulation_type(o.str("type"));
    } catch (const Error& e) {
      schema(o.where("type") + ": " + e.what());
    }
  }
  if (o.opt("handle_orientation")) {
    try {
      d.handle_orientation = parse_handle_orientation(o.str("handle_orientation"));
    } catch (const Error& e) {
      schema(o.where("handle_orientation") + ": " + e.what());
    }
  }
  d.score = o.num("score", 1.0);
  if (d.score < 0.0 || d.score > 1.0) schema(o.where("score") + ": must lie in [0, 1]");
  o.finish();
  return d;
}

const ArticulationParams& Scenario::require_object() const {
  if (!object) schema("scenario '" + name + "' has no object block");
  return *object;
}

SeqIKOptions Scenario::seqik() const {
  SeqIKOptions o = seqik_options_for(require_object().atype);
  o.retries = experiment.retries;
  o.retry_seed = experiment.seed;
  return o;
}

Scenario scenario_from_json(const Json& j, const fs::path& base_dir) {
  Obj o(j, "scenario");
  Scenario s;
  s.base_dir = base_dir;
  s.name = o.str("name", "scenario");
  o.str("description", "");
  if (o.opt("object")) {
    Obj ob = o.child("object");
    s.object = params_from(ob);
    if (ob.opt("geometry")) s.geometry = geometry_from(ob.child("geometry"));
    ob.finish();
  }
  if (const Json* d = o.opt("detection")) s.detection = detection_from_json(*d, base_dir);
  if (o.opt("robot")) s.model = robot_from(o.child("robot"));
  if (o.opt("scene")) s.obstacles = obstacles_from(o.child("scene"));
  if (o.opt("experiment")) s.experiment = experiment_from(o.child("experiment"));
  o.finish();
  return s;
}

Scenario load_scenario(const fs::path& path) {
  const Json j = parse_json(read_text(path), path.string());
  return scenario_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

}  // namespace artopen
