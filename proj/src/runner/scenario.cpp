#include "tubemass/runner/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json_util.hpp"

namespace tubemass::runner {

using namespace json_util;

namespace {

std::vector<int> exponents(const Json& term, std::size_t count, const std::string& path) {
  const Json& e = need(term, "exponents", path);
  if (!e.is_array() || e.size() != count)
    throw ConfigError(fmt::format("{}.exponents needs {} integers", path, count));
  std::vector<int> out;
  for (std::size_t i = 0; i < count; ++i) {
    const long long v = integer(e[i], fmt::format("{}.exponents[{}]", path, i));
    if (v < 0 || v > 31) throw ConfigError(fmt::format("{}.exponents[{}] must lie in [0, 31]", path, i));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

cd coefficient(const Json& term, const std::string& path) {
  allow_keys(term, {"exponents", "coeff_re", "coeff_im"}, path);
  return {number_or(term, "coeff_re", 0.0, path), number_or(term, "coeff_im", 0.0, path)};
}

// (re, im) of sum c z^a conj(z)^b as real polynomials in (x, y).
std::pair<RealPoly, RealPoly> zzbar_parts(const Json& terms, int n, const std::string& path) {
  RealPoly re(2 * n), im(2 * n);
  std::size_t i = 0;
  for (const Json& t : array_of(terms, path)) {
    const std::string tp = fmt::format("{}[{}]", path, i++);
    const cd c = coefficient(t, tp);
    const auto e = exponents(t, static_cast<std::size_t>(2 * n), tp);
    RealPoly pr = RealPoly::constant(2 * n, c.real()), pi = RealPoly::constant(2 * n, c.imag());
    for (int j = 0; j < n; ++j) {
      const RealPoly x = RealPoly::variable(2 * n, j), y = RealPoly::variable(2 * n, n + j);
      for (int k = 0; k < e[static_cast<std::size_t>(j)]; ++k) {
        RealPoly nr = pr * x - pi * y, ni = pr * y + pi * x;
        pr = std::move(nr);
        pi = std::move(ni);
      }
      for (int k = 0; k < e[static_cast<std::size_t>(n + j)]; ++k) {
        RealPoly nr = pr * x + pi * y, ni = pi * x - pr * y;
        pr = std::move(nr);
        pi = std::move(ni);
      }
    }
    re = re + pr;
    im = im + pi;
  }
  return {re, im};
}

RealPoly real_poly(const Json& terms, int n, const std::string& path) {
  auto [re, im] = zzbar_parts(terms, n, path);
  double scale = 0.0, stray = 0.0;
  for (const auto& t : re.terms()) scale = std::max(scale, std::abs(t.coeff));
  for (const auto& t : im.terms()) stray = std::max(stray, std::abs(t.coeff));
  if (stray > 1e-12 * std::max(1.0, scale)) throw ConfigError(fmt::format("{} is not real-valued", path));
  return re;
}

// Real polynomial in k chart parameters: terms {exponents: k, coeff_re}.
RealPoly chart_poly(const Json& terms, int k, const std::string& path) {
  std::vector<RealPoly::Term> out;
  std::size_t i = 0;
  for (const Json& t : array_of(terms, path)) {
    const std::string tp = fmt::format("{}[{}]", path, i++);
    const cd c = coefficient(t, tp);
    if (c.imag() != 0.0) throw ConfigError(fmt::format("{}: chart coordinates are real", tp));
    const auto e = exponents(t, static_cast<std::size_t>(k), tp);
    RealPoly::Term term;
    for (int v = 0; v < k; ++v) term.exponents[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(e[static_cast<std::size_t>(v)]);
    term.coeff = c.real();
    out.push_back(term);
  }
  return RealPoly(k, std::move(out));
}

// Constructors of the compute modules validate their own arguments; inside a
// config those failures are config errors.
template <class F>
auto config_guard(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  } catch (const DimensionError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Task parse_task(const std::string& tag) {
  static const std::pair<const char*, Task> kTasks[] = {
      {"tube-mass", Task::tube_mass}, {"monotone", Task::monotone}, {"convex", Task::convex},
      {"zeros", Task::zeros},         {"hausdorff", Task::hausdorff}, {"potential", Task::potential},
      {"expint", Task::expint},       {"verify-forms", Task::verify_forms}};
  for (const auto& [name, t] : kTasks)
    if (tag == name) return t;
  throw ConfigError(fmt::format("unknown task '{}'", tag));
}

std::string task_name(Task task) {
  switch (task) {
    case Task::tube_mass: return "tube-mass";
    case Task::monotone: return "monotone";
    case Task::convex: return "convex";
    case Task::zeros: return "zeros";
    case Task::hausdorff: return "hausdorff";
    case Task::potential: return "potential";
    case Task::expint: return "expint";
    case Task::verify_forms: return "verify-forms";
  }
  return "?";
}

std::string git_blob_hash(const std::string& bytes) {
  const std::string header = fmt::format("blob {}", bytes.size());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size() + 1) != 1 ||  // includes the NUL
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw NumericalError("SHA-1 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  const std::string root = "$";
  allow_keys(doc, {"schema_version", "name", "description", "task", "seed", "n", "sampling", "manifold", "current",
                   "profile", "weight", "convex", "zeros", "potential", "expint", "forms"},
             root);
  const long long version = integer(need(doc, "schema_version", root), "$.schema_version");
  if (version != kSchemaVersion)
    throw ConfigError(fmt::format("schema_version {} unsupported (expected {})", version, kSchemaVersion));
  Scenario s;
  const Json& name = need(doc, "name", root);
  if (!name.is_string() || name.get<std::string>().empty()) throw ConfigError("$.name must be a non-empty string");
  s.name = name.get<std::string>();
  if (s.name.find_first_of("/\\") != std::string::npos) throw ConfigError("$.name must not contain path separators");
  const Json& task = need(doc, "task", root);
  if (!task.is_string()) throw ConfigError("$.task must be a string");
  s.task = parse_task(task.get<std::string>());
  const Json& seed = need(doc, "seed", root);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    throw ConfigError("$.seed must be a nonnegative integer");
  s.sampling.seed = seed.get<std::uint64_t>();
  if (doc.contains("n")) {
    const long long n = integer(doc["n"], "$.n");
    if (n < 1 || n > kMaxDim) throw ConfigError(fmt::format("$.n must lie in [1, {}]", kMaxDim));
    s.n = static_cast<int>(n);
  } else if (s.task != Task::verify_forms) {
    throw ConfigError("missing $.n");
  }
  if (doc.contains("sampling")) {
    const Json& sp = doc["sampling"];
    allow_keys(sp, {"samples", "batches", "epsilon_factor"}, "$.sampling");
    if (sp.contains("samples")) {
      const long long v = integer(sp["samples"], "$.sampling.samples");
      if (v < 1) throw ConfigError("$.sampling.samples must be positive");
      s.sampling.samples = static_cast<std::size_t>(v);
    }
    if (sp.contains("batches")) {
      const long long v = integer(sp["batches"], "$.sampling.batches");
      if (v < 2 || v > 4096) throw ConfigError("$.sampling.batches must lie in [2, 4096]");
      s.sampling.batches = static_cast<int>(v);
    }
    if (sp.contains("epsilon_factor")) s.sampling.epsilon_factor = positive(sp, "epsilon_factor", "$.sampling");
  }
  auto require_section = [&](const char* key) { (void)need(doc, key, root); };
  switch (s.task) {
    case Task::tube_mass: require_section("manifold"), require_section("current"), require_section("profile"); break;
    case Task::monotone:
      require_section("manifold"), require_section("current"), require_section("weight"), require_section("profile");
      break;
    case Task::convex: require_section("current"), require_section("convex"), require_section("profile"); break;
    case Task::zeros:
    case Task::hausdorff: require_section("manifold"), require_section("current"), require_section("zeros"); break;
    case Task::potential: require_section("potential"); break;
    case Task::expint: require_section("manifold"), require_section("expint"); break;
    case Task::verify_forms: require_section("forms"); break;
  }
  s.doc = std::move(doc);
  s.config_hash = git_blob_hash(text);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

HoloPoly parse_holo(const Json& terms, int n, const std::string& path) {
  std::vector<HoloPoly::Term> out;
  std::size_t i = 0;
  for (const Json& t : array_of(terms, path)) {
    const std::string tp = fmt::format("{}[{}]", path, i++);
    const cd c = coefficient(t, tp);
    const auto e = exponents(t, static_cast<std::size_t>(2 * n), tp);
    HoloPoly::Term term;
    for (int j = 0; j < n; ++j) {
      if (e[static_cast<std::size_t>(n + j)] != 0)
        throw ConfigError(fmt::format("{}: conjugate exponents must vanish in a holomorphic polynomial", tp));
      term.exponents[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(e[static_cast<std::size_t>(j)]);
    }
    term.coeff = c;
    out.push_back(term);
  }
  return HoloPoly(n, std::move(out));
}

jets::ScalarField parse_field(const Json& j, int n, const std::string& path) {
  using jets::ScalarField;
  const Json& kind_j = need(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(fmt::format("{}.kind must be a string", path));
  const std::string kind = kind_j.get<std::string>();
  auto arg = [&]() { return parse_field(need(j, "arg", path), n, path + ".arg"); };
  if (kind == "poly") {
    allow_keys(j, {"kind", "terms"}, path);
    return ScalarField::polynomial(n, real_poly(need(j, "terms", path), n, path + ".terms"));
  }
  if (kind == "constant") {
    allow_keys(j, {"kind", "value"}, path);
    return ScalarField::constant(n, number(j, "value", path));
  }
  if (kind == "norm_squared") {
    allow_keys(j, {"kind"}, path);
    return ScalarField::norm_squared(n);
  }
  if (kind == "log_abs") {
    // log|f| = log(Re f^2 + Im f^2) / 2
    allow_keys(j, {"kind", "terms"}, path);
    const HoloPoly f = parse_holo(need(j, "terms", path), n, path + ".terms");
    if (f.is_zero()) throw ConfigError(fmt::format("{}: log|f| needs f != 0", path));
    auto [re, im] = f.real_parts();
    return 0.5 * jets::log(ScalarField::polynomial(n, re * re + im * im));
  }
  if (kind == "log" || kind == "sqrt" || kind == "exp" || kind == "square") {
    allow_keys(j, {"kind", "arg"}, path);
    const ScalarField a = arg();
    if (kind == "log") return jets::log(a);
    if (kind == "sqrt") return jets::sqrt(a);
    if (kind == "exp") return jets::exp(a);
    return jets::square(a);
  }
  if (kind == "scale") {
    allow_keys(j, {"kind", "factor", "arg"}, path);
    return number(j, "factor", path) * arg();
  }
  if (kind == "sum" || kind == "product") {
    allow_keys(j, {"kind", "args"}, path);
    const Json& args = array_of(need(j, "args", path), path + ".args");
    if (args.empty()) throw ConfigError(fmt::format("{}.args is empty", path));
    std::optional<ScalarField> acc;
    for (std::size_t i = 0; i < args.size(); ++i) {
      ScalarField f = parse_field(args[i], n, fmt::format("{}.args[{}]", path, i));
      acc = !acc ? f : (kind == "sum" ? *acc + f : *acc * f);
    }
    return *acc;
  }
  throw ConfigError(fmt::format("{}.kind '{}' unknown", path, kind));
}

std::shared_ptr<const manifold::DefiningSystem> parse_manifold(const Json& j, int n, const std::string& path) {
  using namespace manifold;
  if (j.contains("catalog")) {
    allow_keys(j, {"catalog", "radius", "eps"}, path);
    const Json& c = j["catalog"];
    if (!c.is_string()) throw ConfigError(fmt::format("{}.catalog must be a string", path));
    const std::string name = c.get<std::string>();
    const double r = j.contains("radius") ? positive(j, "radius", path) : 1.0;
    auto fixed_n = [&](int want) {
      if (n != want) throw ConfigError(fmt::format("{}: '{}' lives in C^{}, scenario has n = {}", path, name, want, n));
    };
    return config_guard(path, [&]() -> std::shared_ptr<const DefiningSystem> {
      if (name == "real_space") return std::make_shared<DefiningSystem>(catalog::real_space(n, r));
      if (name == "real_plane_pair") return std::make_shared<DefiningSystem>(catalog::real_plane_pair(n, r));
      if (name == "complex_line") return fixed_n(2), std::make_shared<DefiningSystem>(catalog::complex_line(r));
      if (name == "small_graph")
        return fixed_n(2), std::make_shared<DefiningSystem>(catalog::small_graph(number_or(j, "eps", 0.1, path), r));
      if (name == "curved") return fixed_n(2), std::make_shared<DefiningSystem>(catalog::curved(r));
      if (name == "siegel") return fixed_n(2), std::make_shared<DefiningSystem>(catalog::siegel(r));
      if (name == "c_r_zero") return fixed_n(3), std::make_shared<DefiningSystem>(catalog::c_r_zero(r));
      if (name == "sphere") return fixed_n(2), std::make_shared<DefiningSystem>(catalog::sphere(r));
      throw ConfigError(fmt::format("{}.catalog '{}' unknown", path, name));
    });
  }
  allow_keys(j, {"custom", "radius"}, path);
  const Json& cu = need(j, "custom", path);
  const std::string cp = path + ".custom";
  allow_keys(cu, {"name", "rho", "chart"}, cp);
  const double r = j.contains("radius") ? positive(j, "radius", path) : 1.0;
  std::vector<jets::ScalarField> rho;
  const Json& rj = array_of(need(cu, "rho", cp), cp + ".rho");
  for (std::size_t i = 0; i < rj.size(); ++i) rho.push_back(parse_field(rj[i], n, fmt::format("{}.rho[{}]", cp, i)));
  std::optional<Chart> chart;
  if (cu.contains("chart")) {
    const Json& ch = cu["chart"];
    const std::string chp = cp + ".chart";
    allow_keys(ch, {"params", "coords"}, chp);
    const sampling::Box params = parse_box(need(ch, "params", chp), chp + ".params");
    const Json& coords = array_of(need(ch, "coords", chp), chp + ".coords");
    if (coords.size() != static_cast<std::size_t>(2 * n))
      throw ConfigError(fmt::format("{}.coords needs {} polynomials (x then y)", chp, 2 * n));
    std::vector<RealPoly> polys;
    for (std::size_t i = 0; i < coords.size(); ++i)
      polys.push_back(chart_poly(coords[i], params.dim(), fmt::format("{}.coords[{}]", chp, i)));
    chart = config_guard(chp, [&] { return Chart::polynomial(n, std::move(polys), params); });
  }
  std::string name = "custom";
  if (cu.contains("name")) {
    if (!cu["name"].is_string()) throw ConfigError(fmt::format("{}.name must be a string", cp));
    name = cu["name"].get<std::string>();
  }
  return config_guard(path, [&] { return std::make_shared<const DefiningSystem>(n, std::move(rho), r, chart, name); });
}

currents::CurrentSpec parse_current(const Json& j, int n, std::uint64_t seed, const std::string& path) {
  const Json& kind_j = need(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(fmt::format("{}.kind must be a string", path));
  const std::string kind = kind_j.get<std::string>();
  if (kind == "divisor") {
    allow_keys(j, {"kind", "terms"}, path);
    const HoloPoly f = parse_holo(need(j, "terms", path), n, path + ".terms");
    return config_guard(path, [&] { return currents::make_divisor(f); });
  }
  if (kind == "variety") {
    allow_keys(j, {"kind", "map", "domain"}, path);
    if (n < 2) throw ConfigError(fmt::format("{}: varieties need n >= 2", path));
    currents::ParametrizedVariety v;
    const Json& map = array_of(need(j, "map", path), path + ".map");
    if (map.size() != static_cast<std::size_t>(n)) throw ConfigError(fmt::format("{}.map needs {} components", path, n));
    for (std::size_t i = 0; i < map.size(); ++i) v.map.push_back(parse_holo(map[i], n - 1, fmt::format("{}.map[{}]", path, i)));
    const Json& dom = array_of(need(j, "domain", path), path + ".domain");
    if (dom.size() != static_cast<std::size_t>(n - 1))
      throw ConfigError(fmt::format("{}.domain needs {} factors", path, n - 1));
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const std::string dp = fmt::format("{}.domain[{}]", path, i);
      const std::string fk = need(dom[i], "kind", dp).is_string() ? dom[i]["kind"].get<std::string>() : "";
      currents::ParamFactor f;
      if (fk == "disc") {
        allow_keys(dom[i], {"kind", "radius"}, dp);
        f.kind = currents::ParamFactor::Kind::disc;
        f.radius = positive(dom[i], "radius", dp);
      } else if (fk == "rect") {
        allow_keys(dom[i], {"kind", "re", "im"}, dp);
        f.kind = currents::ParamFactor::Kind::rect;
        const sampling::Box b = parse_box(Json::array({need(dom[i], "re", dp), need(dom[i], "im", dp)}), dp);
        f.re = b.axes[0];
        f.im = b.axes[1];
      } else {
        throw ConfigError(fmt::format("{}.kind must be 'disc' or 'rect'", dp));
      }
      v.domain.push_back(f);
    }
    return config_guard(path, [&] { return currents::make_variety(std::move(v)); });
  }
  if (kind == "smooth") {
    allow_keys(j, {"kind", "phi", "check_radius", "check_samples"}, path);
    jets::ScalarField phi = parse_field(need(j, "phi", path), n, path + ".phi");
    const double radius = j.contains("check_radius") ? positive(j, "check_radius", path) : 1.0;
    const long long samples = j.contains("check_samples") ? integer(j["check_samples"], path + ".check_samples") : 256;
    if (samples < 1) throw ConfigError(fmt::format("{}.check_samples must be positive", path));
    return config_guard(path, [&] { return currents::make_smooth(std::move(phi), radius, static_cast<int>(samples), seed); });
  }
  throw ConfigError(fmt::format("{}.kind '{}' unknown", path, kind));
}

currents::ConvexBody parse_convex(const Json& j, int n, const std::string& path) {
  allow_keys(j, {"kind", "a", "b", "radius"}, path);
  const Json& kind_j = need(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(fmt::format("{}.kind must be a string", path));
  const std::string kind = kind_j.get<std::string>();
  auto vec = [&](const char* key) {
    const Json& a = array_of(need(j, key, path), fmt::format("{}.{}", path, key));
    if (a.size() != static_cast<std::size_t>(n)) throw ConfigError(fmt::format("{}.{} needs {} entries", path, key, n));
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_number(a[i], fmt::format("{}.{}[{}]", path, key, i)));
    return out;
  };
  currents::ConvexBody body;
  body.a = vec("a");
  if (kind == "point") {
    body.kind = currents::ConvexBody::Kind::point;
  } else if (kind == "box") {
    body.kind = currents::ConvexBody::Kind::box;
    body.b = vec("b");
  } else if (kind == "segment") {
    body.kind = currents::ConvexBody::Kind::segment;
    body.b = vec("b");
  } else if (kind == "ball") {
    body.kind = currents::ConvexBody::Kind::ball;
    body.radius = positive(j, "radius", path);
  } else {
    throw ConfigError(fmt::format("{}.kind '{}' unknown", path, kind));
  }
  return body;
}

sampling::Box parse_box(const Json& j, const std::string& path) {
  const Json& a = array_of(j, path);
  if (a.empty()) throw ConfigError(fmt::format("{} needs at least one axis", path));
  std::vector<Interval> axes;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string ap = fmt::format("{}[{}]", path, i);
    if (!a[i].is_array() || a[i].size() != 2) throw ConfigError(fmt::format("{} must be [lo, hi]", ap));
    const double lo = as_number(a[i][0], ap + "[0]"), hi = as_number(a[i][1], ap + "[1]");
    if (!(hi > lo)) throw ConfigError(fmt::format("{} needs lo < hi", ap));
    axes.push_back({lo, hi});
  }
  return sampling::Box(std::move(axes));
}

}  // namespace tubemass::runner
