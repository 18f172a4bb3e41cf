// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace hdx;
namespace fs = std::filesystem;

namespace {

constexpr int kSamples = 50;

class Criterion {
 public:
  explicit Criterion(std::string id, std::string title) : id_(std::move(id)), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  // records |value| <= tol, tracking the worst observed value
  void small(double value, double tol, const std::string& what) {
    worst_ = std::max(worst_, std::abs(value));
    std::ostringstream os;
    os << what << ": " << value << " > " << tol;
    check(std::abs(value) <= tol, os.str());
  }
  void slack(double s, const std::string& what) {
    min_slack_ = std::min(min_slack_, s);
    std::ostringstream os;
    os << what << ": slack " << s;
    check(s >= -kSlackTol, os.str());
  }

  bool report() const {
    const bool ok = failed_ == 0;
    std::cout << id_ << " " << (ok ? "PASS" : "FAIL") << "  " << title_ << "  (" << checks_ << " checks";
    if (worst_ > 0) std::cout << ", worst residual " << worst_;
    if (min_slack_ < INFINITY) std::cout << ", min slack " << min_slack_;
    std::cout << ")\n";
    for (const auto& f : failures_) std::cout << "    " << f << "\n";
    if (failed_ > failures_.size()) std::cout << "    ... " << failed_ - failures_.size() << " more\n";
    return ok;
  }

 private:
  std::string id_, title_;
  std::size_t checks_ = 0, failed_ = 0;
  double worst_ = 0.0, min_slack_ = INFINITY;
  std::vector<std::string> failures_;
};

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Cochain vec(const PureComplex& X, int k, std::vector<double> v) {
  return Cochain(X, k, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::string tag(const std::string& name, const char* key, int v) { return name + " " + key + "=" + std::to_string(v); }

void ac1_operators(Criterion& c) {
  std::vector<fixtures::Named> fx = {{"T3", fixtures::t3()}, {"C42", fixtures::c42()}, {"K5^3", fixtures::k53()}};
  for (unsigned s = 1; s <= 3; ++s) fx.push_back({"random(7,2,12," + std::to_string(s) + ")", fixtures::random72(s)});
  Rng rng(101);
  for (const auto& [name, X] : fx) {
    const int d = X.top_dim();
    for (int k = -1; k <= d - 1; ++k) {
      const auto U = up_down_explicit(X, k);
      c.small(max_abs((adjoint_diff(X, k) * diff(X, k)).matrix - U.matrix), 1e-12, tag(name, "U_k", k));
      c.small(max_abs(up_down(X, k, 1).matrix - U.matrix), 1e-12, tag(name, "U_k iterated", k));
      for (int t = 0; t < 100; ++t) {
        auto f = random_cochain(X, k, rng);
        auto g = random_cochain(X, k + 1, rng);
        c.small(inner_product(X, diff(X, k).apply(f), g) - inner_product(X, f, adjoint_diff(X, k).apply(g)), 1e-12,
                tag(name, "adjointness", k));
      }
    }
    for (int k = 0; k <= d; ++k) {
      const auto D = down_up_explicit(X, k);
      c.small(max_abs((diff(X, k - 1) * adjoint_diff(X, k - 1)).matrix - D.matrix), 1e-12, tag(name, "D_k", k));
      c.small(max_abs(down_up(X, k, 0).matrix - D.matrix), 1e-12, tag(name, "D_k iterated", k));
    }
    for (int k = 0; k <= d - 1; ++k) {
      const auto U = up_down_explicit(X, k).matrix;
      const auto n = U.rows();
      Eigen::MatrixXd m = ((k + 2.0) / (k + 1.0)) * U - (1.0 / (k + 1)) * Eigen::MatrixXd::Identity(n, n);
      c.small(max_abs(nonlazy(X, k).matrix - m), 1e-12, tag(name, "non-lazy", k));
    }
    for (int i = 1; i <= d; ++i)
      c.small(max_abs(nonlazy_from_iup(X, i).matrix - nonlazy(X, 0).matrix), 1e-12, tag(name, "i-up non-lazy", i));
  }
}

void ac2_weights(Criterion& c) {
  for (const auto& [name, X] : fixtures::all()) {
    auto r = check_invariants(X);
    c.check(r.closed && r.pure, name + " closed and pure");
    c.small(r.weight_sum_error, 1e-12, name + " weight sums");
    c.small(r.recursive_error, 1e-12, name + " recursive weights");
    for (int i = 0; i < X.top_dim(); ++i)
      for (const Face& s : X.faces(i)) {
        auto L = link_of(X, s);
        auto lr = check_invariants(L);
        c.small(lr.weight_sum_error, 1e-12, name + " link " + s.str() + " weight sums");
        for (int j = 0; j <= L.top_dim(); ++j)
          for (const Face& t : L.faces(j)) c.small(L.weight(t) - link_weight(X, s, t), 1e-12, name + " link weight " + s.str());
        for (std::size_t b = 0; b < s.size(); ++b) {
          Face tau = s.without_index(b);
          c.small(weight_distance(L, link_of(link_of(X, tau), s - tau)), 1e-12, name + " link composition " + s.str());
        }
      }
  }
}

void ac3_viewers(Criterion& c) {
  Rng rng(103);
  for (const auto& [name, X] : fixtures::all()) {
    const int d = X.top_dim();
    for (ViewerKind v : {ViewerKind::restriction, ViewerKind::localization})
      for (int k = 0; k <= d; ++k) {
        const std::string where = name + " " + to_string(v) + " k=" + std::to_string(k);
        const bool walk = v == ViewerKind::localization ? (k >= 1 && k <= d - 1) : (k <= d - 2);
        for (int t = 0; t < kSamples; ++t) {
          auto f = random_cochain(X, k, rng), g = random_cochain(X, k, rng);
          c.small(viewer_axiom_residuals(v, X, f, g).worst(), 1e-10, where + " axioms");
          if (walk) c.small(respects_walk_residual(v, X, f), 1e-10, where + " walk");
        }
      }
  }
}

void ac4_decomposition(Criterion& c) {
  Rng rng(104);
  for (const auto& [name, X] : fixtures::all())
    for (int k = 0; k <= X.top_dim(); ++k) {
      const std::string where = tag(name, "k", k);
      auto bases = proper_bases(X, k);
      std::size_t total = 0;
      for (const auto& b : bases) total += b.size();
      c.check(total == X.count(k), where + " level dimensions sum to the cochain space");
      for (int t = 0; t < kSamples; ++t) {
        auto f = random_cochain(X, k, rng);
        auto dec = proper_decompose(X, f, bases);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.values().size());
        double parseval = 0.0;
        for (int i = -1; i < dec.levels() - 1 + 1; ++i) {
          if (i > k) break;
          sum += dec.component(i).values();
          parseval += dec.norm_sq(i);
          c.small(membership_residual(X, bases[static_cast<std::size_t>(i + 1)], dec.component(i)), 1e-10, where + " membership");
          for (int j = i + 1; j <= k; ++j)
            c.small(inner_product(X, dec.component(i), dec.component(j)), 1e-10, where + " orthogonality");
        }
        c.small(max_abs(sum - f.values()), 1e-10, where + " reconstruction");
        c.small(parseval - norm_sq(X, f), 1e-9, where + " Parseval");
      }
    }
  auto bases = proper_bases(fixtures::c42(), 1);
  c.check(bases.size() == 3 && bases[0].size() == 1 && bases[1].size() == 3 && bases[2].size() == 2,
          "C42 k=1 proper level dimensions are 1, 3, 2");
}

void ac5_advantage(Criterion& c) {
  Rng rng(105);
  for (const auto& [name, X] : fixtures::all()) {
    const double gamma = lambda2_skeleton(X);
    for (int k = 1; k <= X.top_dim(); ++k)
      for (int t = 0; t < kSamples; ++t)
        c.slack(advantage_check(X, k, random_orthogonal_to_constants(X, k, rng), gamma).slack, tag(name, "k", k));
  }
  auto T = fixtures::t3();
  auto r = advantage_check(T, 1, vec(T, 1, {1, -1, 0}));
  c.small(r.lhs - 1.0 / 6, 1e-12, "T3 tight lhs");
  c.small(r.rhs - 1.0 / 6, 1e-12, "T3 tight rhs");
}

// Shared sampling for the fine-grained and Alev-Lau criteria.
void ac6_ac7_fine_grained(Criterion& fine, Criterion& al) {
  Rng rng(106);
  for (const auto& [name, X] : fixtures::all())
    for (int k = 0; k < X.top_dim(); ++k) {
      auto ctx = WalkContext::make(X, k);
      for (int t = 0; t < kSamples; ++t) {
        auto f = random_orthogonal_to_constants(X, k, rng);
        auto r = fine_grained_check(ctx, f);
        fine.slack(r.slack, tag(name, "k", k));
        auto a = alev_lau_check(ctx, f);
        al.slack(a.slack, tag(name, "Alev-Lau k", k));
        al.slack(a.rhs - r.rhs, tag(name, "dominance k", k));
      }
    }
  auto C = fixtures::c42();
  auto ctx = WalkContext::make(C, 1);
  auto star = vec(C, 1, {1, -1, 0, 0, -1, 1});
  auto s = fine_grained_check(ctx, star);
  fine.small(s.slack, 1e-9, "C42 level-1 eigenvector slack");
  fine.small(s.per_level.at(1).coefficient + 0.5, 1e-9, "C42 level-1 coefficient");
  auto lifted = diff(C, 0).apply(vec(C, 0, {1, -1, 0, 0}));
  auto l = fine_grained_check(ctx, lifted);
  fine.small(l.slack, 1e-9, "C42 lifted level-0 slack");
  fine.small(l.per_level.at(0).coefficient, 1e-9, "C42 level-0 coefficient");
  auto a = alev_lau_check(ctx, star);
  fine.check(a.improvement >= 0.499 * norm_sq(C, star), "C42 improvement over Alev-Lau on the level-1 eigenvector");
  // top of the spectrum of M_1 away from constants
  auto spec = selfadjoint_spectrum(C, nonlazy(C, 1));
  al.small(spec.eigenvalues[1] - ctx.coefficient(0), 1e-9, "C42 worst quadratic form vs Alev-Lau coefficient");
  al.small(ctx.coefficient(0), 1e-9, "C42 Alev-Lau coefficient is 0");
}

void ac8_bootstrap(Criterion& c) {
  for (const auto& [name, X] : fixtures::all()) {
    LambdaTable t(gamma_profile(X));
    for (int k = 1; k <= X.top_dim() - 1; ++k) {
      auto cert = bootstrap_certificate(X, k);
      c.slack(cert.worst_slack_first, tag(name, "first condition k", k));
      c.slack(cert.worst_slack_second, tag(name, "second condition k", k));
    }
    for (int k = 0; k <= t.max_k(); ++k) {
      auto ctx = WalkContext::make(X, k);
      for (int i = 0; i <= k; ++i) {
        c.small(t.at(i, k) - t.recursive(i, k), 1e-12, tag(name, "closed vs recursive k", k));
        c.small(t.at(i, k) - ctx.coefficient(i), 1e-12, tag(name, "closed vs walk coefficient k", k));
      }
    }
  }
}

void ac9_trickling(Criterion& c) {
  for (const auto& [name, X] : fixtures::all()) {
    auto r = trickling_down_check(X, 9);
    c.check(r.pass, name + " trickling down");
    c.small(r.advantage_residual, 1e-12, name + " advantage identity");
  }
  for (int n = 4; n <= 8; ++n) {
    auto r = trickling_down_check(complete_complex(n, 2));
    const std::string where = "complete(" + std::to_string(n) + ",2)";
    c.small(r.actual - r.bound, 1e-9, where + " tightness");
    c.small(r.actual + 1.0 / (n - 1), 1e-9, where + " actual");
  }
}

void ac10_oriented(Criterion& c) {
  Rng rng(110);
  for (const auto& [name, X] : fixtures::all()) {
    for (int i = -1; i + 1 < X.top_dim(); ++i)
      c.small(max_abs((coboundary(X, i + 1) * coboundary(X, i)).matrix), 1e-12, tag(name, "coboundary squared i", i));
    for (int k = 1; k <= X.top_dim(); ++k)
      for (int t = 0; t < kSamples; ++t) {
        auto m = minimal_representative(X, random_cochain(X, k, rng));
        c.small(max_local_minimality_residual(X, m), 1e-10, tag(name, "local minimality k", k));
        c.small(k_level_check(X, m), 1e-10, tag(name, "k-level k", k));
      }
  }
  auto C = fixtures::c42();
  auto b = balanced_check(C, {Face{0, 1}, Face{2, 3}}, 0);
  c.small(b.defect, 1e-12, "C42 matching defect");
  c.small(b.zero_level_residual, 1e-10, "C42 matching centered indicator level");
}

int run(const std::string& cmd) {
  int st = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}

void ac11_cli(Criterion& c) {
  const std::string cli = HDX_CLI_PATH;
  fs::path dir = fs::temp_directory_path() / ("hdx_acceptance_" + std::to_string(getpid()));
  fs::create_directories(dir);
  auto file = [&](const char* n) { return (dir / n).string(); };

  // round trips
  for (const auto& [name, X] : fixtures::all()) {
    auto text = write_complex(X);
    write_file(file("fx.txt"), text);
    auto back = parse_complex(read_file(file("fx.txt")));
    c.check(write_complex(back) == text, name + " complex file round trip");
    c.small(weight_distance(X, back), 1e-15, name + " round trip weights");
  }
  auto W = build_complex({Face{0, 1, 2}, Face{1, 2, 3}, Face{2, 3, 4}}, {0.2, 0.3, 0.5});
  c.check(write_complex(parse_complex(write_complex(W))) == write_complex(W), "weighted complex round trip");
  c.check(run(cli + " generate random 7 2 12 1 -o " + file("r.txt")) == 0, "generate exits 0");
  c.check(read_file(file("r.txt")) == write_complex(fixtures::random72(1)), "generated file matches the library");
  Rng rng(111);
  auto f = random_cochain(fixtures::c42(), 1, rng);
  write_file(file("f.txt"), write_cochain(f));
  c.check(parse_cochain(read_file(file("f.txt")), fixtures::c42()).values() == f.values(), "cochain file round trip");

  // determinism
  for (const char* th : {"fine-grained", "advantage", "bootstrap", "trickling"}) {
    const std::string cmd = cli + " verify " + file("r.txt") + " --theorem " + th + " --samples 10 --seed 5 --json";
    auto a = capture(cmd), b = capture(cmd);
    c.check(!a.empty() && a == b, std::string(th) + " verify output is byte-identical");
    auto j = nlohmann::json::parse(a, nullptr, false);
    bool keys = j.is_object() && j.size() == 4 && j.contains("theorem") && j.contains("fixtures") && j.contains("slacks") &&
                j.contains("pass");
    c.check(keys, std::string(th) + " verify JSON keys");
    if (keys) c.check(j["pass"].get<bool>(), std::string(th) + " verify passes");
  }

  // exit codes
  write_file(file("c42.txt"), write_complex(fixtures::c42()));
  c.check(run(cli + " analyze " + file("c42.txt") + " --lambda 0") == 0, "analyze at lambda 0 exits 0");
  c.check(run(cli + " analyze " + file("c42.txt") + " --lambda -0.5") == 1, "analyze below gamma_-1 exits 1");
  write_file(file("split.txt"), "dim 2\n0 1 2\n3 4 5\n");
  c.check(run(cli + " analyze " + file("split.txt")) == 3, "disconnected complex exits 3");
  c.check(run(cli + " verify " + file("split.txt") + " --theorem trickling") == 3, "trickling hypothesis failure exits 3");
  write_file(file("bad.txt"), "dim 2\n0 1\n");
  c.check(run(cli + " analyze " + file("bad.txt")) == 2, "malformed file exits 2");
  c.check(run(cli + " verify " + file("c42.txt") + " --theorem nope") == 2, "unknown theorem exits 2");
  c.check(run(cli + " analyze") == 2, "missing argument exits 2");
  c.check(run(cli + " verify " + file("c42.txt") + " --theorem fine-grained") == 0, "verify exits 0");

  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::cout.precision(3);
  std::vector<Criterion> cs;
  const char* titles[] = {"operator identities",  "weights and links",     "viewer axioms and walk identity",
                          "proper decomposition", "advantage lemma",       "fine-grained bound",
                          "Alev-Lau dominance",   "bootstrap certificate", "trickling down",
                          "oriented cochains",    "command line"};
  for (int i = 0; i < 11; ++i) cs.emplace_back("AC" + std::to_string(i + 1), titles[i]);

  auto guarded = [&](std::size_t i, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      cs[i].check(false, std::string("exception: ") + e.what());
    }
  };
  guarded(0, [&] { ac1_operators(cs[0]); });
  guarded(1, [&] { ac2_weights(cs[1]); });
  guarded(2, [&] { ac3_viewers(cs[2]); });
  guarded(3, [&] { ac4_decomposition(cs[3]); });
  guarded(4, [&] { ac5_advantage(cs[4]); });
  guarded(5, [&] { ac6_ac7_fine_grained(cs[5], cs[6]); });
  guarded(7, [&] { ac8_bootstrap(cs[7]); });
  guarded(8, [&] { ac9_trickling(cs[8]); });
  guarded(9, [&] { ac10_oriented(cs[9]); });
  guarded(10, [&] { ac11_cli(cs[10]); });

  int failed = 0;
  for (const auto& c : cs) failed += c.report() ? 0 : 1;
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
