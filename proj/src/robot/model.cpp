// Copyright 2026 Quadpong Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quadpong/robot/model.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace quadpong::robot {

namespace {

Mat3 rpy_to_mat(double r, double p, double y) {
  return (Eigen::AngleAxisd(y, Vec3::UnitZ()) *
          Eigen::AngleAxisd(p, Vec3::UnitY()) *
          Eigen::AngleAxisd(r, Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 mat_to_rpy(const Mat3& m) {
  return m.eulerAngles(2, 1, 0).reverse();
}

[[noreturn]] void parse_fail(int line_no, const std::string& msg) {
  throw std::runtime_error("model parse error at line " +
                           std::to_string(line_no) + ": " + msg);
}

}  // namespace

int RobotModel::num_actuated() const {
  int n = 0;
  for (const auto& j : joints) n += j.actuated ? 1 : 0;
  return n;
}

int RobotModel::link_index(const std::string& link_name) const {
  for (size_t i = 0; i < links.size(); ++i) {
    if (links[i].name == link_name) return static_cast<int>(i);
  }
  return -1;
}

int RobotModel::frame_index(const std::string& frame_name) const {
  for (size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].name == frame_name) return static_cast<int>(i);
  }
  throw std::runtime_error("unknown frame: " + frame_name);
}

VecX RobotModel::rest_joints() const {
  VecX q(num_joints());
  for (int i = 0; i < num_joints(); ++i) q[i] = joints[i].rest;
  return q;
}

VecX RobotModel::joint_lower() const {
  VecX q(num_joints());
  for (int i = 0; i < num_joints(); ++i) q[i] = joints[i].q_min;
  return q;
}

VecX RobotModel::joint_upper() const {
  VecX q(num_joints());
  for (int i = 0; i < num_joints(); ++i) q[i] = joints[i].q_max;
  return q;
}

VecX RobotModel::effort_limits() const {
  VecX u(num_actuated());
  int k = 0;
  for (const auto& j : joints) {
    if (j.actuated) u[k++] = j.effort;
  }
  return u;
}

MatX RobotModel::selection_matrix() const {
  MatX B = MatX::Zero(nv(), num_actuated());
  int k = 0;
  for (int j = 0; j < num_joints(); ++j) {
    if (joints[j].actuated) B(6 + j, k++) = 1.0;
  }
  return B;
}

void RobotModel::finalize() {
  if (links.empty()) throw std::runtime_error("model has no links");
  const int nl = static_cast<int>(links.size());
  links[0].parent_joint = -1;
  std::vector<int> parent_of_link(nl, -2);
  parent_of_link[0] = -1;

  for (size_t j = 0; j < joints.size(); ++j) {
    const Joint& jt = joints[j];
    if (jt.parent_link < 0 || jt.parent_link >= nl || jt.child_link <= 0 ||
        jt.child_link >= nl) {
      throw std::runtime_error("joint " + jt.name + " references bad links");
    }
    if (jt.child_link == jt.parent_link) {
      throw std::runtime_error("joint " + jt.name + " makes a self-loop");
    }
    if (jt.parent_link >= jt.child_link) {
      throw std::runtime_error("joint " + jt.name +
                               " is not topologically ordered (cycle?)");
    }
    if (parent_of_link[jt.child_link] != -2) {
      throw std::runtime_error("link " + links[jt.child_link].name +
                               " has two parent joints");
    }
    parent_of_link[jt.child_link] = static_cast<int>(j);
    links[jt.child_link].parent_joint = static_cast<int>(j);
    if (std::abs(jt.axis.norm() - 1.0) > 1e-9) {
      throw std::runtime_error("joint " + jt.name + " axis is not unit");
    }
    if (jt.q_min > jt.q_max) {
      throw std::runtime_error("joint " + jt.name + " has empty range");
    }
  }
  for (int l = 1; l < nl; ++l) {
    if (parent_of_link[l] == -2) {
      throw std::runtime_error("link " + links[l].name + " is disconnected");
    }
  }

  for (const auto& l : links) {
    if (l.mass <= 0.0) throw std::runtime_error("link " + l.name + " mass <= 0");
    if ((l.inertia - l.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::runtime_error("link " + l.name + " inertia not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(l.inertia);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw std::runtime_error("link " + l.name + " inertia not SPD");
    }
  }

  for (const auto& f : frames) {
    if (f.link < 0 || f.link >= nl) {
      throw std::runtime_error("frame " + f.name + " references bad link");
    }
  }

  chains_.assign(nl, {});
  for (int l = 1; l < nl; ++l) {
    const Joint& jt = joints[links[l].parent_joint];
    chains_[l] = chains_[jt.parent_link];
    chains_[l].push_back(links[l].parent_joint);
  }
  foot_frames_.clear();
  for (size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].is_foot) foot_frames_.push_back(static_cast<int>(i));
  }
}

std::string RobotModel::serialize() const {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "robotfile 1\n";
  os << "name " << name << "\n";
  for (const auto& l : links) {
    os << "link " << l.name << " mass " << l.mass << " com " << l.com.x()
       << ' ' << l.com.y() << ' ' << l.com.z() << " inertia "
       << l.inertia(0, 0) << ' ' << l.inertia(1, 1) << ' ' << l.inertia(2, 2)
       << ' ' << l.inertia(0, 1) << ' ' << l.inertia(0, 2) << ' '
       << l.inertia(1, 2) << "\n";
  }
  for (const auto& j : joints) {
    const Vec3 rpy = mat_to_rpy(j.origin_rot);
    os << "joint " << j.name << " parent " << links[j.parent_link].name
       << " child " << links[j.child_link].name << " xyz " << j.origin_xyz.x()
       << ' ' << j.origin_xyz.y() << ' ' << j.origin_xyz.z() << " rpy "
       << rpy.x() << ' ' << rpy.y() << ' ' << rpy.z() << " axis "
       << j.axis.x() << ' ' << j.axis.y() << ' ' << j.axis.z() << " range "
       << j.q_min << ' ' << j.q_max << " effort " << j.effort << " rest "
       << j.rest << (j.actuated ? "" : " passive") << "\n";
  }
  for (const auto& f : frames) {
    os << "frame " << f.name << " link " << links[f.link].name << " xyz "
       << f.offset.x() << ' ' << f.offset.y() << ' ' << f.offset.z()
       << (f.is_foot ? " foot" : "") << "\n";
  }
  return os.str();
}

uint64_t RobotModel::hash() const {
  // FNV-1a over the canonical serialization.
  uint64_t h = 1469598103934665603ull;
  for (const char c : serialize()) {
    h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  return h;
}

RobotModel RobotModel::parse(const std::string& text) {
  RobotModel model;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;

  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;

    auto want = [&](size_t n) {
      if (tok.size() < n) parse_fail(line_no, "truncated " + tok[0] + " entry");
    };
    auto num = [&](size_t i) -> double {
      try {
        return std::stod(tok.at(i));
      } catch (...) {
        parse_fail(line_no, "bad number '" + tok.at(i) + "'");
      }
    };

    if (tok[0] == "robotfile") {
      want(2);
      if (tok[1] != "1") parse_fail(line_no, "unsupported version " + tok[1]);
      header_seen = true;
    } else if (tok[0] == "name") {
      want(2);
      model.name = tok[1];
    } else if (tok[0] == "link") {
      want(13);
      Link l;
      l.name = tok[1];
      if (tok[2] != "mass" || tok[4] != "com" || tok[8] != "inertia") {
        parse_fail(line_no, "malformed link entry");
      }
      l.mass = num(3);
      l.com = Vec3(num(5), num(6), num(7));
      const double ixx = num(9), iyy = num(10), izz = num(11);
      const double ixy = num(12), ixz = tok.size() > 13 ? num(13) : 0.0;
      const double iyz = tok.size() > 14 ? num(14) : 0.0;
      l.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
      model.links.push_back(l);
    } else if (tok[0] == "joint") {
      want(25);
      Joint j;
      j.name = tok[1];
      if (tok[2] != "parent" || tok[4] != "child" || tok[6] != "xyz" ||
          tok[10] != "rpy" || tok[14] != "axis" || tok[18] != "range" ||
          tok[21] != "effort" || tok[23] != "rest") {
        parse_fail(line_no, "malformed joint entry");
      }
      j.parent_link = model.link_index(tok[3]);
      j.child_link = model.link_index(tok[5]);
      if (j.parent_link < 0) parse_fail(line_no, "unknown parent link " + tok[3]);
      if (j.child_link < 0) parse_fail(line_no, "unknown child link " + tok[5]);
      j.origin_xyz = Vec3(num(7), num(8), num(9));
      j.origin_rot = rpy_to_mat(num(11), num(12), num(13));
      j.axis = Vec3(num(15), num(16), num(17)).normalized();
      j.q_min = num(19);
      j.q_max = num(20);
      j.effort = num(22);
      j.rest = num(24);
      j.actuated = true;
      for (size_t i = 25; i < tok.size(); ++i) {
        if (tok[i] == "passive") j.actuated = false;
      }
      model.joints.push_back(j);
    } else if (tok[0] == "frame") {
      want(8);
      Frame f;
      f.name = tok[1];
      if (tok[2] != "link" || tok[4] != "xyz") {
        parse_fail(line_no, "malformed frame entry");
      }
      f.link = model.link_index(tok[3]);
      if (f.link < 0) parse_fail(line_no, "unknown link " + tok[3]);
      f.offset = Vec3(num(5), num(6), num(7));
      for (size_t i = 8; i < tok.size(); ++i) {
        if (tok[i] == "foot") f.is_foot = true;
      }
      model.frames.push_back(f);
    } else {
      parse_fail(line_no, "unknown entry '" + tok[0] + "'");
    }
  }
  if (!header_seen) throw std::runtime_error("model file missing header");
  model.finalize();
  return model;
}

RobotModel RobotModel::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void RobotModel::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write model file: " + path);
  f << serialize();
}

RobotModel make_default_model() {
  RobotModel m;
  m.name = "spot_arm";

  auto add_link = [&](const std::string& name, double mass, const Vec3& com,
                      const Vec3& inertia_diag) {
    Link l;
    l.name = name;
    l.mass = mass;
    l.com = com;
    l.inertia = inertia_diag.asDiagonal();
    m.links.push_back(l);
    return static_cast<int>(m.links.size() - 1);
  };
  auto add_joint = [&](const std::string& name, int parent, int child,
                       const Vec3& xyz, const Vec3& axis, double lo, double hi,
                       double effort, double rest) {
    Joint j;
    j.name = name;
    j.parent_link = parent;
    j.child_link = child;
    j.origin_xyz = xyz;
    j.axis = axis;
    j.q_min = lo;
    j.q_max = hi;
    j.effort = effort;
    j.rest = rest;
    m.joints.push_back(j);
  };

  const int base = add_link("base", 26.0, Vec3::Zero(), Vec3(0.6, 2.5, 2.9));

  struct LegDef {
    const char* prefix;
    double sx, sy;
  };
  const LegDef legs[4] = {{"fl", 1, 1}, {"fr", 1, -1}, {"hl", -1, 1}, {"hr", -1, -1}};
  for (const auto& leg : legs) {
    const std::string p = leg.prefix;
    const int hip = add_link(p + "_hip", 1.6, Vec3(0, leg.sy * 0.06, 0),
                             Vec3(0.004, 0.004, 0.004));
    add_joint(p + "_hx", base, hip, Vec3(leg.sx * 0.32, leg.sy * 0.17, 0),
              Vec3::UnitX(), -0.785, 0.785, 45, leg.sy * 0.05);
    const int upper = add_link(p + "_upper", 1.2, Vec3(0, 0, -0.17),
                               Vec3(0.013, 0.013, 0.002));
    add_joint(p + "_hy", hip, upper, Vec3(0, leg.sy * 0.11, 0), Vec3::UnitY(),
              -2.0, 2.0, 45, 0.6);
    const int lower = add_link(p + "_lower", 0.45, Vec3(0, 0, -0.17),
                               Vec3(0.005, 0.005, 0.0005));
    add_joint(p + "_kn", upper, lower, Vec3(0, 0, -0.35), Vec3::UnitY(), -2.6,
              -0.25, 60, -1.1);
    Frame foot;
    foot.name = "foot_" + p;
    foot.link = lower;
    foot.offset = Vec3(0, 0, -0.35);
    foot.is_foot = true;
    m.frames.push_back(foot);
  }

  const int shoulder =
      add_link("arm_shoulder", 1.1, Vec3(0, 0, 0.04), Vec3(0.004, 0.004, 0.004));
  add_joint("arm_sh0", base, shoulder, Vec3(0.29, 0, 0.10), Vec3::UnitZ(), -2.6,
            2.6, 30, 0.0);
  const int upper_arm = add_link("arm_upper", 1.7, Vec3(0.17, 0, 0),
                                 Vec3(0.002, 0.018, 0.018));
  add_joint("arm_sh1", shoulder, upper_arm, Vec3(0, 0, 0.08), Vec3::UnitY(),
            -2.2, 1.6, 30, -1.0);
  const int forearm =
      add_link("arm_forearm", 1.35, Vec3(0.16, 0, 0), Vec3(0.0015, 0.012, 0.012));
  add_joint("arm_el0", upper_arm, forearm, Vec3(0.34, 0, 0), Vec3::UnitY(),
            -0.4, 2.4, 25, 1.8);
  const int wrist_roll =
      add_link("arm_wrist_roll", 0.7, Vec3(0.04, 0, 0), Vec3(0.001, 0.001, 0.001));
  add_joint("arm_el1", forearm, wrist_roll, Vec3(0.33, 0, 0), Vec3::UnitX(),
            -2.6, 2.6, 15, 0.0);
  const int wrist_pitch = add_link("arm_wrist_pitch", 0.55, Vec3(0.03, 0, 0),
                                   Vec3(0.0008, 0.0008, 0.0008));
  add_joint("arm_wr0", wrist_roll, wrist_pitch, Vec3(0.08, 0, 0), Vec3::UnitY(),
            -1.6, 1.6, 15, 0.77);
  const int hand =
      add_link("arm_hand", 0.6, Vec3(0.12, 0, 0), Vec3(0.0008, 0.0015, 0.0015));
  add_joint("arm_wr1", wrist_pitch, hand, Vec3(0.06, 0, 0), Vec3::UnitX(), -2.8,
            2.8, 12, 0.0);

  Frame paddle_center;
  paddle_center.name = "paddle_center";
  paddle_center.link = hand;
  paddle_center.offset = Vec3(0.18, 0, 0);
  m.frames.push_back(paddle_center);
  // The face normal is the unit vector from paddle_center to this point.
  Frame paddle_tip;
  paddle_tip.name = "paddle_normal_tip";
  paddle_tip.link = hand;
  paddle_tip.offset = Vec3(0.18, 0, 0.1);
  m.frames.push_back(paddle_tip);

  m.finalize();
  return m;
}

}  // namespace quadpong::robot
