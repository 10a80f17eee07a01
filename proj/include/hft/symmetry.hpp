#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hft/eigen.hpp"
#include "hft/error.hpp"
#include "hft/matrix.hpp"

namespace hft {

struct GroupElement {
  std::string label;
  Matrix matrix;
};

// Orthogonal matrices realizing a finite group. The first element is expected to be E.
struct GroupRep {
  std::string name;
  std::vector<GroupElement> elements;

  std::size_t order() const { return elements.size(); }
  std::size_t dim() const { return elements.empty() ? 0 : elements.front().matrix.rows(); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i].label == label) return i;
    return std::nullopt;
  }
};

struct IrrepLabel {
  std::string label;
  std::vector<int> characters;

  bool operator==(const IrrepLabel&) const = default;
};

// Character table of an abelian group: every irrep is one-dimensional.
struct CharacterTable {
  std::string group_name;
  std::vector<std::string> element_order;
  std::vector<IrrepLabel> rows;

  const IrrepLabel& irrep(const std::string& label) const {
    for (const auto& r : rows)
      if (r.label == label) return r;
    throw PreconditionError("CharacterTable: unknown irrep '" + label + "'");
  }
};

// C2v with element order (E, C2, σv1, σv2).
inline CharacterTable c2v_character_table() {
  return {"C2v",
          {"E", "C2", "sv1", "sv2"},
          {{"A1", {1, 1, 1, 1}}, {"A2", {1, 1, -1, -1}}, {"B1", {1, -1, 1, -1}},
           {"B2", {1, -1, -1, 1}}}};
}

struct GroupVerification {
  bool nonempty = false;
  bool orthogonal = false;
  bool closed = false;
  bool identity_first = false;
  // multiplication_table[i][j] = k with U_i·U_j ≈ U_k, or -1 when no element matches.
  std::vector<std::vector<int>> multiplication_table;
  std::vector<std::string> failures;

  bool passed() const { return nonempty && orthogonal && closed && identity_first; }
};

inline GroupVerification verify_group(const GroupRep& rep) {
  GroupVerification out;
  out.nonempty = !rep.elements.empty();
  if (!out.nonempty) {
    out.failures.push_back("group has no elements");
    return out;
  }
  const std::size_t d = rep.dim();
  out.orthogonal = true;
  for (const auto& e : rep.elements) {
    if (e.matrix.rows() != d || e.matrix.cols() != d) {
      out.orthogonal = false;
      out.failures.push_back("element " + e.label + " has wrong shape");
      continue;
    }
    const double err = orthonormality_error(e.matrix);
    if (err > 1e-12) {
      out.orthogonal = false;
      std::ostringstream msg;
      msg << "element " << e.label << " is not orthogonal (|UᵀU − I|_max = " << err << ")";
      out.failures.push_back(msg.str());
    }
  }
  out.identity_first = max_abs_diff(rep.elements.front().matrix, Matrix::identity(d)) <= 1e-12;
  if (!out.identity_first) out.failures.push_back("first element is not the identity");
  if (!out.orthogonal) return out;

  out.closed = true;
  const std::size_t g = rep.order();
  out.multiplication_table.assign(g, std::vector<int>(g, -1));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      const Matrix prod = rep.elements[i].matrix * rep.elements[j].matrix;
      for (std::size_t k = 0; k < g; ++k)
        if (max_abs_diff(prod, rep.elements[k].matrix) <= 1e-10) {
          out.multiplication_table[i][j] = static_cast<int>(k);
          break;
        }
      if (out.multiplication_table[i][j] < 0) {
        out.closed = false;
        out.failures.push_back("product " + rep.elements[i].label + "·" + rep.elements[j].label +
                               " is not in the group");
      }
    }
  return out;
}

// Row orthogonality under (1/|G|)·Σ χ_a(g)χ_b(g) and ±1 entries.
inline bool table_is_valid(const CharacterTable& table) {
  const std::size_t g = table.element_order.size();
  for (const auto& r : table.rows) {
    if (r.characters.size() != g) return false;
    for (int c : r.characters)
      if (c != 1 && c != -1) return false;
  }
  for (std::size_t a = 0; a < table.rows.size(); ++a)
    for (std::size_t b = 0; b < table.rows.size(); ++b) {
      int s = 0;
      for (std::size_t k = 0; k < g; ++k)
        s += table.rows[a].characters[k] * table.rows[b].characters[k];
      if (s != (a == b ? static_cast<int>(g) : 0)) return false;
    }
  return true;
}

// max over elements of |Uᵀ·m·U − m|_max
inline double commutant_residual(const GroupRep& rep, const Matrix& m) {
  double worst = 0.0;
  for (const auto& e : rep.elements) {
    require(e.matrix.rows() == m.rows() && m.square(), "commutant_residual: dimension mismatch");
    const Matrix t = e.matrix.transposed() * m * e.matrix;
    worst = std::max(worst, max_abs_diff(t, m));
  }
  return worst;
}

namespace detail {
// Index into rep.elements for each column of the table.
inline std::vector<std::size_t> table_columns(const GroupRep& rep, const CharacterTable& table) {
  require(table.element_order.size() == rep.order(),
          "character table and representation have different group orders");
  std::vector<std::size_t> cols;
  for (const auto& label : table.element_order) {
    const auto idx = rep.index_of(label);
    require(idx.has_value(), "representation has no element '" + label + "'");
    cols.push_back(*idx);
  }
  return cols;
}
}  // namespace detail

struct StateSymmetry {
  std::optional<IrrepLabel> irrep;  // empty when the vector mixes irreps
  Vector characters;                // ⟨v|U(g)|v⟩ in table element order
};

inline StateSymmetry classify_vector(std::span<const double> v, const GroupRep& rep,
                                     const CharacterTable& table, double tol = 1e-6) {
  require(v.size() == rep.dim(), "classify: dimension mismatch");
  const auto cols = detail::table_columns(rep, table);
  StateSymmetry out;
  const double nn = dot(v, v);
  for (std::size_t c : cols) out.characters.push_back(bilinear(v, rep.elements[c].matrix, v) / nn);
  for (const auto& row : table.rows) {
    bool match = true;
    for (std::size_t k = 0; k < cols.size() && match; ++k)
      match = std::abs(out.characters[k] - row.characters[k]) <= tol;
    if (match) {
      out.irrep = row;
      break;
    }
  }
  return out;
}

// One entry per eigenvector column, in the spectrum's column order.
inline std::vector<StateSymmetry> classify(const Spectrum& spectrum, const GroupRep& rep,
                                           const CharacterTable& table, double tol = 1e-6) {
  std::vector<StateSymmetry> out;
  out.reserve(spectrum.dim());
  for (std::size_t k = 0; k < spectrum.dim(); ++k)
    out.push_back(classify_vector(spectrum.vector(k), rep, table, tol));
  return out;
}

// P·v with P = (1/|G|)·Σ χ(g)·U(g). Not normalized.
inline Vector project(std::span<const double> v, const IrrepLabel& irrep, const GroupRep& rep,
                      const CharacterTable& table) {
  require(v.size() == rep.dim(), "project: dimension mismatch");
  const auto cols = detail::table_columns(rep, table);
  require(irrep.characters.size() == cols.size(), "project: character row has wrong length");
  Vector out(v.size(), 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Vector uv = rep.elements[cols[k]].matrix * v;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += irrep.characters[k] * uv[i];
  }
  for (double& x : out) x /= static_cast<double>(rep.order());
  return out;
}

inline Matrix projector(const IrrepLabel& irrep, const GroupRep& rep, const CharacterTable& table) {
  const std::size_t d = rep.dim();
  Matrix p(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector e(d, 0.0);
    e[j] = 1.0;
    p.set_column(j, project(e, irrep, rep, table));
  }
  return p;
}

// Plain-text group file:
//
//   group C2v
//   element E
//   1 0
//   0 1
//   element C2
//   ...
//   irrep A1 1 1 1 1
//
// One matrix per `element` block, a row per line, whitespace-separated reals.
// `irrep` lines list characters in element order. '#' starts a comment.
struct GroupFile {
  GroupRep rep;
  std::optional<CharacterTable> table;
};

inline GroupFile read_group_file(std::istream& in) {
  GroupFile out;
  std::vector<std::vector<double>> rows;
  std::string pending_label;
  bool in_element = false;
  std::vector<IrrepLabel> irreps;
  int line_no = 0;

  auto flush = [&] {
    if (!in_element) return;
    require(!rows.empty(), "group file: element '" + pending_label + "' has no rows");
    const std::size_t d = rows.size();
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      require(rows[i].size() == d, "group file: element '" + pending_label + "' is not square");
      for (std::size_t j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    require(out.rep.elements.empty() || out.rep.dim() == d,
            "group file: element '" + pending_label + "' has inconsistent dimension");
    out.rep.elements.push_back({pending_label, std::move(m)});
    rows.clear();
    in_element = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "group") {
      flush();
      ls >> out.rep.name;
    } else if (head == "element") {
      flush();
      require(static_cast<bool>(ls >> pending_label),
              "group file line " + std::to_string(line_no) + ": element needs a label");
      in_element = true;
    } else if (head == "irrep") {
      flush();
      IrrepLabel row;
      require(static_cast<bool>(ls >> row.label),
              "group file line " + std::to_string(line_no) + ": irrep needs a label");
      int c;
      while (ls >> c) row.characters.push_back(c);
      irreps.push_back(std::move(row));
    } else {
      require(in_element, "group file line " + std::to_string(line_no) + ": unexpected '" + head + "'");
      std::istringstream rs(line);
      std::vector<double> r;
      std::string tok;
      while (rs >> tok) {
        try {
          std::size_t used = 0;
          r.push_back(std::stod(tok, &used));
          require(used == tok.size(), "");
        } catch (const std::exception&) {
          throw PreconditionError("group file line " + std::to_string(line_no) +
                                  ": bad number '" + tok + "'");
        }
      }
      rows.push_back(std::move(r));
    }
  }
  flush();
  require(!out.rep.elements.empty(), "group file: no elements");
  if (!irreps.empty()) {
    CharacterTable t;
    t.group_name = out.rep.name;
    for (const auto& e : out.rep.elements) t.element_order.push_back(e.label);
    t.rows = std::move(irreps);
    for (const auto& r : t.rows)
      require(r.characters.size() == t.element_order.size(),
              "group file: irrep '" + r.label + "' has wrong number of characters");
    out.table = std::move(t);
  }
  return out;
}

inline void write_group_file(std::ostream& out, const GroupRep& rep,
                             const CharacterTable* table = nullptr) {
  const auto old_precision = out.precision(17);
  out << "group " << rep.name << '\n';
  for (const auto& e : rep.elements) {
    out << "element " << e.label << '\n';
    for (std::size_t i = 0; i < e.matrix.rows(); ++i) {
      for (std::size_t j = 0; j < e.matrix.cols(); ++j) out << (j ? " " : "") << e.matrix(i, j);
      out << '\n';
    }
  }
  if (table) {
    const auto cols = detail::table_columns(rep, *table);
    for (const auto& r : table->rows) {
      out << "irrep " << r.label;
      // characters follow the file's element order
      for (std::size_t e = 0; e < rep.order(); ++e) {
        const auto it = std::find(cols.begin(), cols.end(), e);
        out << ' ' << r.characters[static_cast<std::size_t>(it - cols.begin())];
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace hft
