#ifndef CRM_SYMMETRY_HPP
#define CRM_SYMMETRY_HPP

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "crm/tensor.hpp"

namespace crm {

/// A permutation of {1,2,3,4}, stored as the image list (sigma(1)..sigma(4)).
struct Perm4 {
  std::array<int, 4> images{1, 2, 3, 4};

  Perm4() = default;
  explicit Perm4(std::array<int, 4> img) : images(img) {
    std::array<bool, 4> seen{};
    for (int v : images) {
      if (v < 1 || v > 4 || seen[v - 1])
        throw Error("Perm4: images are not a permutation of 1..4");
      seen[v - 1] = true;
    }
  }

  int operator()(int x) const { return images[x - 1]; }

  bool operator==(const Perm4& o) const { return images == o.images; }

  Perm4 inverse() const {
    std::array<int, 4> inv{};
    for (int x = 1; x <= 4; ++x) inv[images[x - 1] - 1] = x;
    return Perm4(inv);
  }

  /// Function composition: (after_then(*this))(x) = after((*this)(x)).
  Perm4 then(const Perm4& after) const {
    std::array<int, 4> img{};
    for (int x = 1; x <= 4; ++x) img[x - 1] = after((*this)(x));
    return Perm4(img);
  }

  std::string cycle_notation() const {
    std::string out;
    std::array<bool, 4> done{};
    for (int start = 1; start <= 4; ++start) {
      if (done[start - 1] || (*this)(start) == start) continue;
      out += '(';
      int x = start;
      do {
        done[x - 1] = true;
        out += static_cast<char>('0' + x);
        x = (*this)(x);
      } while (x != start);
      out += ')';
    }
    return out.empty() ? "id" : out;
  }

  static std::vector<Perm4> all() {
    std::array<int, 4> img{1, 2, 3, 4};
    std::vector<Perm4> out;
    do out.push_back(Perm4(img));
    while (std::next_permutation(img.begin(), img.end()));
    return out;
  }

  /// Accepts "id", an image string like "1432", or cycles like "(24)(13)".
  static Perm4 parse(const std::string& text) {
    if (text == "id" || text == "e" || text == "()") return Perm4();
    if (text.size() == 4 && text.find('(') == std::string::npos) {
      std::array<int, 4> img{};
      for (int i = 0; i < 4; ++i) {
        if (text[i] < '1' || text[i] > '4')
          throw ParseError("Perm4: bad image character '" + std::string(1, text[i]) + "'");
        img[i] = text[i] - '0';
      }
      return Perm4(img);
    }
    std::array<int, 4> img{1, 2, 3, 4};
    std::size_t pos = 0;
    while (pos < text.size()) {
      if (text[pos] != '(')
        throw ParseError("Perm4: expected '(' at position " + std::to_string(pos));
      const std::size_t close = text.find(')', pos);
      if (close == std::string::npos) throw ParseError("Perm4: unbalanced cycle");
      std::vector<int> cyc;
      for (std::size_t i = pos + 1; i < close; ++i) {
        const char c = text[i];
        if (c == ' ' || c == ',') continue;
        if (c < '1' || c > '4')
          throw ParseError("Perm4: bad cycle character '" + std::string(1, c) + "'");
        cyc.push_back(c - '0');
      }
      // Right-to-left application order is irrelevant for our disjoint cycles,
      // but compose cycles as written for generality.
      std::array<int, 4> cyc_img{1, 2, 3, 4};
      for (std::size_t i = 0; i < cyc.size(); ++i)
        cyc_img[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
      img = Perm4(img).then(Perm4(cyc_img)).images;
      pos = close + 1;
    }
    return Perm4(img);
  }
};

/// The slot-permutation action L_sigma(a1 a2^t (x) a3 a4^t) =
/// a_{sigma(1)} a_{sigma(2)}^t (x) a_{sigma(3)} a_{sigma(4)}^t on square dims.
///
/// Entrywise, with the 4-index view A[x1,x2,x3,x4] = mat(x1*k + x3, x2*k + x4),
/// the output reads the input at the sigma^{-1}-permuted index tuple.
inline BipartiteOperator l_sigma(const Perm4& sigma, const BipartiteOperator& a) {
  if (!a.square_dims())
    throw NonSquareDims("l_sigma: dims (" + std::to_string(a.k) + "," +
                        std::to_string(a.m) + ")");
  const Eigen::Index k = a.k;
  const Perm4 inv = sigma.inverse();
  CMatrix out(k * k, k * k);
  std::array<Eigen::Index, 4> x{};
  for (x[0] = 0; x[0] < k; ++x[0])
    for (x[1] = 0; x[1] < k; ++x[1])
      for (x[2] = 0; x[2] < k; ++x[2])
        for (x[3] = 0; x[3] < k; ++x[3]) {
          const std::array<Eigen::Index, 4> s{x[inv(1) - 1], x[inv(2) - 1],
                                              x[inv(3) - 1], x[inv(4) - 1]};
          out(x[0] * k + x[2], x[1] * k + x[3]) =
              a.mat(s[0] * k + s[2], s[1] * k + s[3]);
        }
  return {k, k, std::move(out)};
}

/// The six canonical maps fixing slot 1, in the order
/// A, A^t2, S(A), S(A^t2), S(A)^t2, A*T.
inline BipartiteOperator sigma_base_apply(int base_index, const BipartiteOperator& a) {
  switch (base_index) {
    case 0: return a;
    case 1: return partial_transpose(a, Slot::second);
    case 2: return realign_square(a);
    case 3: return realign_square(partial_transpose(a, Slot::second));
    case 4: return partial_transpose(realign_square(a), Slot::second);
    case 5: return {a.k, a.k, a.mat * flip(a.k).mat};
    default: throw Error("sigma_base_apply: base index out of range");
  }
}

/// One dictionary row: sigma equals the base map optionally followed by
/// conjugation with the flip (rho) and/or the global transpose (mu).
struct SigmaEntry {
  Perm4 sigma;
  int base_index = 0;
  bool rho_after = false; // T ( . ) T applied after the base map
  bool mu_after = false;  // global transpose applied last
  std::string formula;
};

inline BipartiteOperator sigma_entry_apply(const SigmaEntry& e,
                                           const BipartiteOperator& a) {
  BipartiteOperator out = sigma_base_apply(e.base_index, a);
  if (e.rho_after) {
    const CMatrix t = flip(out.k).mat;
    out = BipartiteOperator(out.k, out.k, t * out.mat * t);
  }
  if (e.mu_after) out = BipartiteOperator(out.k, out.k, out.mat.transpose());
  return out;
}

/// Identify every sigma in S_4 with its canonical composition by probing
/// random operators; the match is unique, so the composition convention is
/// discovered rather than assumed. Empirically the action composes
/// contravariantly: l_sigma(s, l_sigma(t, A)) == l_sigma(s.then(t), A),
/// i.e. L_s o L_t = L_{t o s} with (t o s)(x) = t(s(x)).
inline std::vector<SigmaEntry> sigma_dictionary(Eigen::Index k) {
  if (k < 2) throw BadDimension("sigma_dictionary: k must be >= 2");
  static const std::array<const char*, 6> base_names = {
      "A", "A^t2", "S(A)", "S(A^t2)", "S(A)^t2", "A*T"};

  std::mt19937_64 rng(0x5194a);
  std::normal_distribution<double> gauss;
  std::vector<BipartiteOperator> probes;
  for (int t = 0; t < 3; ++t) {
    CMatrix x(k * k, k * k);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        x(i, j) = Complex(gauss(rng), gauss(rng));
    probes.emplace_back(k, k, std::move(x));
  }

  std::vector<SigmaEntry> table;
  for (const Perm4& sigma : Perm4::all()) {
    std::vector<BipartiteOperator> truth;
    truth.reserve(probes.size());
    for (const auto& p : probes) truth.push_back(l_sigma(sigma, p));

    bool found = false;
    for (int base = 0; base < 6 && !found; ++base)
      for (int rho = 0; rho < 2 && !found; ++rho)
        for (int mu = 0; mu < 2 && !found; ++mu) {
          SigmaEntry e;
          e.sigma = sigma;
          e.base_index = base;
          e.rho_after = rho == 1;
          e.mu_after = mu == 1;
          bool match = true;
          for (std::size_t t = 0; t < probes.size() && match; ++t) {
            const BipartiteOperator got = sigma_entry_apply(e, probes[t]);
            match = (got.mat - truth[t].mat).norm() <= 1e-12 * probes[t].mat.norm();
          }
          if (match) {
            std::string f = base_names[base];
            if (e.rho_after) f = "T*" + f + "*T";
            if (e.mu_after) f = "(" + f + ")^t";
            e.formula = std::move(f);
            table.push_back(std::move(e));
            found = true;
          }
        }
    if (!found)
      throw Error("sigma_dictionary: no composition matches " + sigma.cycle_notation());
  }
  return table;
}

} // namespace crm

#endif // CRM_SYMMETRY_HPP
