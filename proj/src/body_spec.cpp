#include "convexlab/body_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace convexlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double to_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("value of '" + key + "' is not a number: '" + text + "'");
  }
  return v;
}

class Reader {
 public:
  Reader(const SpecMap& spec, std::string kind) : spec_(spec), kind_(std::move(kind)) {}

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = spec_.find(key);
    return it == spec_.end() ? fallback : to_number(key, it->second);
  }
  double required(const std::string& key) {
    used_.insert(key);
    const auto it = spec_.find(key);
    if (it == spec_.end()) throw ParseError(kind_ + " needs key '" + key + "'");
    return to_number(key, it->second);
  }
  bool has(const std::string& key) const { return spec_.count(key) > 0; }
  std::string text(const std::string& key) {
    used_.insert(key);
    const auto it = spec_.find(key);
    return it == spec_.end() ? std::string() : it->second;
  }
  int dim(int fallback) {
    const double d = number("dim", fallback);
    if (d != 2.0 && d != 3.0) throw ParseError("dim must be 2 or 3");
    return static_cast<int>(d);
  }
  void finish() const {
    for (const auto& [key, value] : spec_) {
      if (key == "kind" || used_.count(key)) continue;
      throw ParseError("unknown key '" + key + "' for body kind '" + kind_ + "'");
    }
  }

 private:
  const SpecMap& spec_;
  std::string kind_;
  std::set<std::string> used_;
};

std::vector<Vec3> parse_point_list(const std::string& key, const std::string& text) {
  std::vector<Vec3> out;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::istringstream fields(row);
    std::vector<double> xs;
    std::string f;
    while (fields >> f) xs.push_back(to_number(key, f));
    if (xs.empty()) continue;
    if (xs.size() != 2 && xs.size() != 3) {
      throw ParseError("'" + key + "' rows need 2 or 3 coordinates");
    }
    out.emplace_back(xs[0], xs[1], xs.size() == 3 ? xs[2] : 0.0);
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot read '" + p.string() + "'");
  return in;
}

int infer_dim(const std::vector<Vec3>& pts) {
  return std::all_of(pts.begin(), pts.end(), [](const Vec3& p) { return p.z() == 0.0; }) ? 2 : 3;
}

}  // namespace

SpecMap parse_inline_spec(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty body spec");
  SpecMap spec;
  const auto colon = s.find(':');
  spec["kind"] = trim(s.substr(0, colon));
  if (colon == std::string::npos) return spec;
  const std::string rest = s.substr(colon + 1);
  if (!rest.empty() && rest.front() == '@') {
    spec["file"] = trim(rest.substr(1));
    return spec;
  }
  std::stringstream parts(rest);
  std::string part;
  while (std::getline(parts, part, ',')) {
    if (trim(part).empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in body spec, got '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    if (key.empty()) throw ParseError("empty key in body spec");
    spec[key] = trim(part.substr(eq + 1));
  }
  return spec;
}

SpecMap parse_spec_document(std::istream& in) {
  SpecMap spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (spec.count(key)) throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    spec[key] = trim(line.substr(eq + 1));
  }
  if (!spec.count("kind")) throw ParseError("body document has no 'kind'");
  return spec;
}

Body body_from_spec(const SpecMap& spec, const std::filesystem::path& base_dir) {
  const auto it = spec.find("kind");
  if (it == spec.end() || it->second.empty()) throw ParseError("body spec has no kind");
  const std::string kind = it->second;
  Reader r(spec, kind);
  Body body;
  if (kind == "ball") {
    const int dim = r.dim(3);
    const Vec3 c(r.number("x", 0), r.number("y", 0), r.number("z", 0));
    body = make_ball(dim, r.number("r", 1.0), c);
  } else if (kind == "ellipsoid") {
    const int dim = r.dim(3);
    body = make_ellipsoid(dim, Vec3(r.number("a", 1), r.number("b", 1), r.number("c", 1)));
  } else if (kind == "capbody") {
    const int dim = r.dim(3);
    body = make_cap_body(dim, r.required("eps"));
  } else if (kind == "polytope") {
    std::vector<Vec3> pts;
    if (r.has("file")) {
      auto in = open_input(resolve(base_dir, r.text("file")));
      pts = read_off_vertices(in);
    } else if (r.has("vertices")) {
      pts = parse_point_list("vertices", r.text("vertices"));
    } else {
      throw ParseError("polytope needs 'file' or 'vertices'");
    }
    body = make_polytope(r.dim(infer_dim(pts)), std::move(pts));
  } else if (kind == "cube") {
    body = unit_cube();
  } else if (kind == "square") {
    body = unit_square();
  } else if (kind == "tetrahedron") {
    body = regular_tetrahedron();
  } else if (kind == "lshape") {
    body = l_tromino();
  } else if (kind == "bumpy") {
    const double seed = r.number("seed", 42);
    const double index = r.number("index", 0);
    if (seed < 0 || index < 0 || seed != std::floor(seed) || index != std::floor(index)) {
      throw DomainError("bumpy seed and index must be nonnegative integers");
    }
    body = random_smooth_body(static_cast<std::uint64_t>(seed), static_cast<int>(index));
  } else if (kind == "point") {
    const int dim = r.dim(3);
    body = make_point_set(dim, {Vec3(r.number("x", 0), r.number("y", 0), r.number("z", 0))});
  } else if (kind == "points") {
    const int dim = r.dim(3);
    body = make_point_set(dim, parse_point_list("points", r.text("points")));
  } else if (kind == "mesh") {
    if (!r.has("file")) throw ParseError("mesh needs 'file'");
    body = make_sampled_surface(read_mesh(resolve(base_dir, r.text("file"))));
  } else {
    throw ParseError("unknown body kind '" + kind +
                     "' (expected ball, ellipsoid, capbody, polytope, cube, square, "
                     "tetrahedron, lshape, bumpy, point, points, mesh)");
  }
  r.finish();
  return body;
}

Body parse_body(std::string_view text, const std::filesystem::path& base_dir) {
  const std::string s = trim(text);
  if (!s.empty() && s.front() == '@') {
    const std::filesystem::path p = resolve(base_dir, s.substr(1));
    auto in = open_input(p);
    return body_from_spec(parse_spec_document(in), p.parent_path());
  }
  return body_from_spec(parse_inline_spec(s), base_dir);
}

std::vector<Body> parse_body_list(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<Body> out;
  std::stringstream parts{std::string(text)};
  std::string part;
  while (std::getline(parts, part, '+')) {
    if (trim(part).empty()) throw ParseError("empty body in '+' list");
    out.push_back(parse_body(part, base_dir));
  }
  if (out.empty()) throw ParseError("empty body list");
  return out;
}

std::vector<Vec3> read_off_vertices(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string t;
    while (fields >> t) tokens.push_back(t);
  }
  std::size_t pos = 0;
  if (pos < tokens.size() && (tokens[pos] == "OFF" || tokens[pos] == "NOFF")) ++pos;
  if (tokens.size() < pos + 3) throw ParseError("OFF header is incomplete");
  const double nv = to_number("vertex count", tokens[pos]);
  if (nv < 0 || nv != std::floor(nv)) throw ParseError("OFF vertex count is invalid");
  pos += 3;
  const std::size_t count = static_cast<std::size_t>(nv);
  const std::size_t stride = tokens[0] == "NOFF" ? 6 : 3;
  if (tokens.size() < pos + count * stride) throw ParseError("OFF vertex block is truncated");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t b = pos + i * stride;
    out.emplace_back(to_number("x", tokens[b]), to_number("y", tokens[b + 1]), to_number("z", tokens[b + 2]));
  }
  return out;
}

}  // namespace convexlab
