#pragma once

#include <iosfwd>
#include <string>

#include "tmscat/exterior.hpp"
#include "tmscat/geometry.hpp"

namespace tmscat {

// Line-oriented scene description, '#' starts a comment:
//
//   background: eps_r mu_r sigma
//   layer 1: circle(cx, cy, r) eps_r mu_r sigma [pec]
//   layer 2: polygon(x1, y1, x2, y2, ...) eps_r mu_r sigma
//   layer 1: sector(cx, cy, r, start_deg, end_deg) eps_r mu_r sigma
//   group            # optional; layers outside a block form one group
//   ...
//   end
//   shell 1: circle(0, 0, 2) eps_r mu_r sigma
//   extension: d
//
// Layer and shell indices count from 1, innermost first, and must be
// consecutive. Throws ParseError on syntax, ValidationError on geometry.
Scene parse_scene(std::istream& in);
Scene load_scene(const std::string& path);

// phi_deg,sigma_m,sigma_db with LF endings, C locale.
void write_rcs_csv(std::ostream& os, const RcsCurve& c);
RcsCurve read_rcs_csv(std::istream& in);

}  // namespace tmscat
