// Copyright 2026 The protonpipe developers
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

#include "protonpipe/integrals.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

constexpr double kSymTol = 1e-10;

std::size_t idx4(std::size_t a, std::size_t b, std::size_t c, std::size_t d,
                 std::size_t n2, std::size_t n3, std::size_t n4) {
  return ((a * n2 + b) * n3 + c) * n4 + d;
}

// The 8 images of <pq|rs> for real orbitals: particle exchange, complex
// conjugation, and their combinations.
std::array<std::array<std::size_t, 4>, 8> phys_images(std::size_t p, std::size_t q,
                                                      std::size_t r, std::size_t s) {
  return {{{p, q, r, s},
           {q, p, s, r},
           {r, s, p, q},
           {s, r, q, p},
           {r, q, p, s},
           {p, s, r, q},
           {s, p, q, r},
           {q, r, s, p}}};
}

}  // namespace

double NeoIntegrals::h2(std::size_t p, std::size_t q, std::size_t r,
                        std::size_t s) const {
  const std::size_t n = layout.n_electron_modes;
  return h2e[idx4(p, q, r, s, n, n, n)];
}

double NeoIntegrals::g(std::size_t P, std::size_t Q, std::size_t p,
                       std::size_t q) const {
  const std::size_t nE = layout.n_electron_modes;
  const std::size_t nP = layout.n_proton_modes;
  return gep[idx4(P, Q, p, q, nP, nE, nE)];
}

void NeoIntegrals::set_h2(std::size_t p, std::size_t q, std::size_t r,
                          std::size_t s, double value) {
  const std::size_t n = layout.n_electron_modes;
  h2e[idx4(p, q, r, s, n, n, n)] = value;
}

void NeoIntegrals::set_g(std::size_t P, std::size_t Q, std::size_t p,
                         std::size_t q, double value) {
  const std::size_t nE = layout.n_electron_modes;
  const std::size_t nP = layout.n_proton_modes;
  gep[idx4(P, Q, p, q, nP, nE, nE)] = value;
}

NeoIntegrals NeoIntegrals::zero(const ModeLayout& layout) {
  NeoIntegrals ints;
  ints.layout = layout;
  const std::size_t nE = layout.n_electron_modes;
  const std::size_t nP = layout.n_proton_modes;
  ints.h1e = Eigen::MatrixXd::Zero(nE, nE);
  ints.v1p = Eigen::MatrixXd::Zero(nP, nP);
  ints.h2e.assign(nE * nE * nE * nE, 0.0);
  ints.gep.assign(nP * nP * nE * nE, 0.0);
  return ints;
}

void NeoIntegrals::validate(double tol) const {
  const std::size_t nE = layout.n_electron_modes;
  const std::size_t nP = layout.n_proton_modes;
  if ((h1e - h1e.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw ValidationError("h_pq is not symmetric");
  }
  if (nP > 0 && (v1p - v1p.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw ValidationError("v_PQ is not symmetric");
  }
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q)
      for (std::size_t r = 0; r < nE; ++r)
        for (std::size_t s = 0; s < nE; ++s) {
          const double ref = h2(p, q, r, s);
          for (const auto& im : phys_images(p, q, r, s)) {
            if (std::abs(h2(im[0], im[1], im[2], im[3]) - ref) > tol) {
              throw ValidationError(
                  "two-body tensor symmetry violated at <" + std::to_string(p) +
                  std::to_string(q) + "|" + std::to_string(r) +
                  std::to_string(s) + ">");
            }
          }
        }
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q)
      for (std::size_t p = 0; p < nE; ++p)
        for (std::size_t q = 0; q < nE; ++q) {
          if (std::abs(g(P, Q, p, q) - g(Q, P, q, p)) > tol) {
            throw ValidationError("coupling tensor g_PQpq is not Hermitian at (" +
                                  std::to_string(P) + "," + std::to_string(Q) +
                                  "," + std::to_string(p) + "," +
                                  std::to_string(q) + ")");
          }
        }
}

namespace {

struct Header {
  std::size_t n_elec = 0;
  std::size_t n_prot = 0;
  bool chem = false;
  double e_core = 0.0;
};

Header parse_header(const std::string& line, std::size_t lineno) {
  Header h;
  std::istringstream in(line);
  std::string tok;
  in >> tok;  // &NEO
  bool saw_elec = false, saw_prot = false, saw_conv = false;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw ParseError("malformed header field `" + tok + "`", lineno);
    }
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "NELEC_MODES") {
        h.n_elec = std::stoul(val);
        saw_elec = true;
      } else if (key == "NPROT_MODES") {
        h.n_prot = std::stoul(val);
        saw_prot = true;
      } else if (key == "CONV") {
        if (val == "PHYS") h.chem = false;
        else if (val == "CHEM") h.chem = true;
        else throw ParseError("CONV must be PHYS or CHEM", lineno);
        saw_conv = true;
      } else if (key == "ECORE") {
        h.e_core = std::stod(val);
      } else {
        throw ParseError("unknown header field `" + key + "`", lineno);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad value for header field `" + key + "`", lineno);
    }
  }
  if (!saw_elec || !saw_prot || !saw_conv) {
    throw ParseError("header must set NELEC_MODES, NPROT_MODES and CONV", lineno);
  }
  return h;
}

// Records explicit entries per canonical slot so each symmetry image can be
// filled and conflicting duplicates detected.
class SymmetricAccumulator {
 public:
  void set(const std::string& block, const std::vector<std::size_t>& canon,
           double value, std::size_t lineno) {
    std::string key = block;
    std::string indices;
    for (auto k : canon) {
      key += ":" + std::to_string(k);
      indices += (indices.empty() ? "(" : ",") + std::to_string(k + 1);
    }
    indices += ")";
    auto [it, inserted] = entries_.try_emplace(key, value);
    if (!inserted && std::abs(it->second - value) > kSymTol) {
      throw ValidationError("symmetry violation in block " + block +
                            " at indices " + indices + " near line " +
                            std::to_string(lineno) + ": conflicting values " +
                            std::to_string(it->second) + " and " +
                            std::to_string(value));
    }
  }

 private:
  std::map<std::string, double> entries_;
};

}  // namespace

NeoIntegrals parse_integrals(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  // Locate the header line.
  Header header;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 4, "&NEO") != 0) {
      throw ParseError("expected &NEO header", lineno);
    }
    header = parse_header(line.substr(first), lineno);
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError("missing &NEO header", lineno + 1);

  NeoIntegrals ints = NeoIntegrals::zero(
      ModeLayout{header.n_elec, header.n_prot});
  ints.e_core = header.e_core;

  SymmetricAccumulator seen;
  std::string block;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "E1" || tok == "E2" || tok == "P1" || tok == "EP") {
      block = tok;
      continue;
    }
    if (block.empty()) {
      throw ParseError("data row before any block label", lineno);
    }
    double value = 0.0;
    {
      std::istringstream vs(tok);
      if (!(vs >> value) || !vs.eof()) {
        throw ParseError("expected numeric value", lineno);
      }
    }
    const std::size_t n_idx = (block == "E1" || block == "P1") ? 2 : 4;
    std::vector<std::size_t> raw(n_idx);
    for (auto& r : raw) {
      long v = 0;
      if (!(ls >> v) || v < 1) {
        throw ParseError("expected " + std::to_string(n_idx) +
                         " 1-based indices in block " + block, lineno);
      }
      r = static_cast<std::size_t>(v - 1);
    }
    std::string trailing;
    if (ls >> trailing) throw ParseError("trailing tokens", lineno);

    const std::size_t nE = ints.layout.n_electron_modes;
    const std::size_t nP = ints.layout.n_proton_modes;
    auto check = [&](std::size_t v, std::size_t bound) {
      if (v >= bound) {
        throw ParseError("index " + std::to_string(v + 1) +
                         " out of range in block " + block, lineno);
      }
    };

    if (block == "E1" || block == "P1") {
      const std::size_t bound = (block == "E1") ? nE : nP;
      check(raw[0], bound);
      check(raw[1], bound);
      seen.set(block, {std::min(raw[0], raw[1]), std::max(raw[0], raw[1])},
               value, lineno);
      Eigen::MatrixXd& m = (block == "E1") ? ints.h1e : ints.v1p;
      m(raw[0], raw[1]) = value;
      m(raw[1], raw[0]) = value;
    } else if (block == "E2") {
      for (auto v : raw) check(v, nE);
      // CHEM rows give (pq|rs) = <pr|qs>.
      std::size_t p = raw[0], q = raw[1], r = raw[2], s = raw[3];
      if (header.chem) {
        std::swap(q, r);
      }
      auto images = phys_images(p, q, r, s);
      std::array<std::size_t, 4> canon = images[0];
      for (const auto& im : images) canon = std::min(canon, im);
      seen.set("E2", {canon[0], canon[1], canon[2], canon[3]}, value, lineno);
      for (const auto& im : images) ints.set_h2(im[0], im[1], im[2], im[3], value);
    } else {  // EP: value P Q p q
      check(raw[0], nP);
      check(raw[1], nP);
      check(raw[2], nE);
      check(raw[3], nE);
      const std::array<std::size_t, 4> a{raw[0], raw[1], raw[2], raw[3]};
      const std::array<std::size_t, 4> b{raw[1], raw[0], raw[3], raw[2]};
      const auto canon = std::min(a, b);
      seen.set("EP", {canon[0], canon[1], canon[2], canon[3]}, value, lineno);
      ints.set_g(a[0], a[1], a[2], a[3], value);
      ints.set_g(b[0], b[1], b[2], b[3], value);
    }
  }

  ints.validate();
  return ints;
}

NeoIntegrals parse_integrals_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open integral file: " + path);
  return parse_integrals(in);
}

void write_integrals(const NeoIntegrals& ints, std::ostream& out) {
  const std::size_t nE = ints.layout.n_electron_modes;
  const std::size_t nP = ints.layout.n_proton_modes;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "&NEO NELEC_MODES=%zu NPROT_MODES=%zu CONV=PHYS ECORE=%.17g\n",
                nE, nP, ints.e_core);
  out << buf;

  out << "E1\n";
  for (std::size_t i = 0; i < nE; ++i)
    for (std::size_t j = i; j < nE; ++j)
      if (ints.h1e(i, j) != 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g %zu %zu\n", ints.h1e(i, j), i + 1,
                      j + 1);
        out << buf;
      }

  out << "E2\n";
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q)
      for (std::size_t r = 0; r < nE; ++r)
        for (std::size_t s = 0; s < nE; ++s) {
          const double v = ints.h2(p, q, r, s);
          if (v == 0.0) continue;
          auto images = phys_images(p, q, r, s);
          std::array<std::size_t, 4> canon = images[0];
          for (const auto& im : images) canon = std::min(canon, im);
          if (canon != images[0]) continue;  // emit representatives only
          std::snprintf(buf, sizeof buf, "%.17g %zu %zu %zu %zu\n", v, p + 1,
                        q + 1, r + 1, s + 1);
          out << buf;
        }

  out << "P1\n";
  for (std::size_t i = 0; i < nP; ++i)
    for (std::size_t j = i; j < nP; ++j)
      if (ints.v1p(i, j) != 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g %zu %zu\n", ints.v1p(i, j), i + 1,
                      j + 1);
        out << buf;
      }

  out << "EP\n";
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q)
      for (std::size_t p = 0; p < nE; ++p)
        for (std::size_t q = 0; q < nE; ++q) {
          const double v = ints.g(P, Q, p, q);
          if (v == 0.0) continue;
          const std::array<std::size_t, 4> a{P, Q, p, q};
          const std::array<std::size_t, 4> b{Q, P, q, p};
          if (std::min(a, b) != a) continue;
          std::snprintf(buf, sizeof buf, "%.17g %zu %zu %zu %zu\n", v, P + 1,
                        Q + 1, p + 1, q + 1);
          out << buf;
        }
}

void write_integrals_file(const NeoIntegrals& ints, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  write_integrals(ints, out);
}

}  // namespace protonpipe
