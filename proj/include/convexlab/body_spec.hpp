#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "convexlab/body.hpp"

namespace convexlab {

/// Body descriptions as text.
///
/// Inline form: `kind` or `kind:key=value,key=value`, e.g. `ball:r=1`,
/// `ellipsoid:a=1,b=1,c=2`, `capbody:eps=0.5`, `polytope:@hull.off`,
/// `cube`. A leading `@` (`@body.txt`) reads a document instead.
///
/// Document form: one `key = value` per line, `#` starts a comment, and
/// `kind` is required.
///
/// Kinds and keys (lengths in body units):
///   ball         r (1), dim (3), x y z (center, 0)
///   ellipsoid    a b c (1), dim (3)
///   capbody      eps (required), dim (3)
///   polytope     file (OFF vertex block) or vertices = "x y z; x y z; ...",
///                dim (inferred: 2 when every z is 0)
///   cube square tetrahedron lshape    no keys
///   bumpy        seed (42), index (0): screened random smooth body
///   point        x y z (0), dim (3): one-point set
///   points       points = "x y z; ...", dim (3)
///   mesh         file (OFF or OBJ closed triangle surface)
/// Unknown kinds or keys raise ParseError; invalid values DomainError.
using SpecMap = std::map<std::string, std::string>;

SpecMap parse_inline_spec(std::string_view text);
SpecMap parse_spec_document(std::istream& in);
Body body_from_spec(const SpecMap& spec, const std::filesystem::path& base_dir = {});

/// Inline or `@document` form.
Body parse_body(std::string_view text, const std::filesystem::path& base_dir = {});

/// Several bodies joined with `+`, e.g. `ball:x=-2 + ball:x=2`.
std::vector<Body> parse_body_list(std::string_view text, const std::filesystem::path& base_dir = {});

/// Vertex block of an OFF file; faces (of any size) are ignored.
std::vector<Vec3> read_off_vertices(std::istream& in);

}  // namespace convexlab
