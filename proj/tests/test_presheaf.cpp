#include <doctest.h>

#include <memory>
#include <set>

#include "properad/error.hpp"
#include "properad/gamma.hpp"
#include "properad/presheaf.hpp"
#include "properad/properad.hpp"

using namespace properad;

namespace {

std::shared_ptr<const ShapeIndex> shapes(int vertices = 3, int in = 2, int out = 2) {
  return std::make_shared<const ShapeIndex>(TruncationOptions{vertices, in, out, 0});
}

// Built once; the shape caches make later tests cheap.
const std::shared_ptr<const ShapeIndex>& bound3() {
  static const auto index = shapes();
  return index;
}

std::size_t shape(const ShapeIndex& index, const WiringGraph& g) {
  auto i = index.find(g);
  REQUIRE(i.has_value());
  return *i;
}

FiniteProperad small_properad() {
  RandomProperadOptions o;
  o.colors = 2;
  o.ops = 2;
  o.weights = 2;
  o.max_inputs = 2;
  o.max_outputs = 2;
  return residue_properad(o, {0, 1}, {1, 0});
}

// Two vertices joined by two parallel edges: a PGC with a double graft.
WiringGraph double_edge() { return make_pgc(PgcSpec{1, 2, 2, 1, {{1, 1}, {2, 2}}}); }

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::set<std::string> all_keys(const ShapeIndex& index, std::size_t k, std::size_t g) {
  std::set<std::string> out;
  for (const auto& f : index.hom(k, g)) out.insert(morphism_key(f));
  return out;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a) {
    if (!b.count(x)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("faces of linear graphs match the simplicial cofaces") {
  const auto& index = *bound3();
  for (int n = 1; n <= 3; ++n) {
    const auto& faces = index.faces(shape(index, make_linear_graph(n)));
    int inner = 0;
    for (const auto& f : faces) inner += f.inner ? 1 : 0;
    CHECK(faces.size() == static_cast<std::size_t>(n + 1));
    CHECK(inner == n - 1);
  }
}

TEST_CASE("maps between linear graphs are the monotone maps of the simplicial category") {
  const auto& index = *bound3();
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const auto count = index.hom(shape(index, make_linear_graph(m)), shape(index, make_linear_graph(n))).size();
      CHECK(static_cast<long long>(count) == binomial(n + m + 1, m + 1));
    }
  }
}

TEST_CASE("representable values") {
  auto index = bound3();
  const auto arrow = index->arrow();
  auto point = representable(index, make_exceptional_edge());
  CHECK(point->elements(arrow).size() == 1);
  CHECK(point->elements(shape(*index, make_corolla(1, 1))).size() == 1);
  CHECK(point->elements(shape(*index, make_corolla(2, 1))).empty());
  CHECK(point->elements(shape(*index, make_linear_graph(2))).size() == 1);

  for (const WiringGraph& g : {make_corolla(2, 1), make_linear_graph(3), double_edge()}) {
    CHECK(representable(index, g)->elements(arrow).size() == g.num_edges());
  }
  // Monotone maps [1] -> [2].
  CHECK(representable(index, make_linear_graph(2))->elements(shape(*index, make_linear_graph(1))).size() == 6);
}

TEST_CASE("restriction in a representable is precomposition") {
  auto index = bound3();
  const std::size_t g = shape(*index, double_edge());
  auto x = representable(index, double_edge());
  const GammaMorphism id = identity_morphism(index->graph(g));
  REQUIRE(x->elements(g).size() == index->hom(g, g).size());
  for (const auto& f : index->faces(g)) CHECK(x->restrict(f.map, morphism_key(id)) == morphism_key(f.map));
}

TEST_CASE("the boundary of a corolla holds only maps through its legs") {
  const auto& index = *bound3();
  const std::size_t c = shape(index, make_corolla(2, 1));
  const auto part = boundary(index, c);
  CHECK(part.generators.size() == 3);
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index.degree(k) > 2) continue;
    std::set<std::string> through_legs;
    for (const auto& f : index.hom(k, c)) {
      if (image_signature(f).back() == '|') through_legs.insert(morphism_key(f));
    }
    CHECK(part_elements(index, part, k) == through_legs);
  }
  CHECK(part_elements(index, part, index.arrow()).size() == 3);
}

TEST_CASE("the Segal core of a corolla is the whole representable") {
  const auto& index = *bound3();
  const std::size_t c = shape(index, make_corolla(1, 2));
  const auto core = segal_core(index, c);
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index.degree(k) > 2) continue;
    CHECK(part_elements(index, core, k) == all_keys(index, k, c));
  }
}

TEST_CASE("Segal core, horns, boundary and representable are nested subpresheaves") {
  const auto& index = *bound3();
  for (const WiringGraph& base : {make_linear_graph(3), double_edge(), make_pgc(PgcSpec{2, 2, 1, 1, {{2, 1}}})}) {
    const std::size_t g = shape(index, base);
    const auto& faces = index.faces(g);
    std::vector<RepresentablePart> parts{segal_core(index, g), boundary(index, g), full_part(index, g)};
    for (std::size_t beta = 0; beta < faces.size(); ++beta) {
      if (faces[beta].inner) parts.push_back(horn(index, g, beta));
    }
    REQUIRE(parts.size() > 3);
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (index.degree(k) > 2) continue;
      const auto sc = part_elements(index, parts[0], k);
      const auto bd = part_elements(index, parts[1], k);
      const auto full = part_elements(index, parts[2], k);
      CHECK(full == all_keys(index, k, g));
      CHECK(subset(bd, full));
      for (std::size_t p = 3; p < parts.size(); ++p) {
        const auto hn = part_elements(index, parts[p], k);
        CHECK(subset(sc, hn));
        CHECK(subset(hn, bd));
      }
    }
    // Closure under precomposition with every generator.
    for (const auto& part : parts) {
      for (std::size_t k = 0; k < index.size(); ++k) {
        if (index.degree(k) > 2) continue;
        std::set<std::string> members = part_elements(index, part, k);
        std::vector<GammaMorphism> into;
        for (const auto& f : index.faces(k)) into.push_back(f.map);
        for (const auto& a : index.automorphisms(k)) into.push_back(a);
        for (const auto& phi : index.hom(k, g)) {
          if (!members.count(morphism_key(phi))) continue;
          for (const auto& a : into) {
            CHECK(part_elements(index, part, index.index_of(*a.source)).count(morphism_key(compose(phi, a))) == 1);
          }
        }
      }
    }
  }
}

TEST_CASE("the inner horns of L3 omit exactly one L2 face") {
  const auto& index = *bound3();
  const std::size_t l3 = shape(index, make_linear_graph(3));
  const std::size_t l2 = shape(index, make_linear_graph(2));
  const auto full = part_elements(index, full_part(index, l3), l2);
  const auto bd = part_elements(index, boundary(index, l3), l2);
  CHECK(full.size() == 20);
  CHECK(bd.size() == 20);
  const auto& faces = index.faces(l3);
  int inner = 0;
  for (std::size_t beta = 0; beta < faces.size(); ++beta) {
    if (!faces[beta].inner) continue;
    ++inner;
    const auto hn = part_elements(index, horn(index, l3, beta), l2);
    CHECK(hn.size() == 19);
    CHECK_FALSE(hn.count(morphism_key(faces[beta].map)));
  }
  CHECK(inner == 2);
  CHECK_THROWS_AS(horn(index, l3, faces.size()), Error);
}

TEST_CASE("the identity fills the tautological horn of a representable") {
  auto index = bound3();
  const std::size_t g = shape(*index, make_linear_graph(3));
  auto x = representable(index, make_linear_graph(3));
  const auto& faces = index->faces(g);
  HornMap h{g, 0, {}};
  REQUIRE(faces[0].inner);
  for (const auto& f : index->horn_faces(g, 0)) h.values.push_back(morphism_key(f.map));
  CHECK(is_natural(*x, h));
  const auto found = fillers(*x, h);
  CHECK(std::find(found.begin(), found.end(), morphism_key(identity_morphism(index->graph(g)))) != found.end());
}

TEST_CASE("a point is vacuously inner Kan") {
  auto index = shapes(1, 2, 2);
  auto x = representable(index, make_exceptional_edge());
  const auto report = has_unique_inner_fillers(*x, 1);
  CHECK(report.ok);
  CHECK(report.checked == 0);
}

TEST_CASE("the Segal map of a corolla is the identity") {
  auto index = bound3();
  auto x = nerve_set(index, small_properad());
  const std::size_t c = shape(*index, make_corolla(2, 1));
  const SegalMap s = segal_map(*x, c);
  REQUIRE(s.image.size() == x->elements(c).size());
  for (std::size_t k = 0; k < s.image.size(); ++k) {
    REQUIRE(s.image[k].size() == 1);
    CHECK(s.image[k][0] == x->elements(c)[k]);
  }
  CHECK(s.compatible.size() == s.image.size());
}

TEST_CASE("the nerve of a properad is Segal with unique inner fillers") {
  auto index = bound3();
  const FiniteProperad p = small_properad();
  auto x = nerve_set(index, p);
  const auto segal = is_segal(*x, 3);
  CHECK(segal.ok);
  CHECK(segal.checked > 0);
  const auto kan = has_unique_inner_fillers(*x, 3);
  CHECK(kan.ok);
  CHECK(kan.checked > 0);
  CHECK(is_inner_kan(*x, 3).ok);

  // A horn of a PGC has exactly one filler.
  const std::size_t g = shape(*index, double_edge());
  REQUIRE(index->faces(g)[0].inner);
  const auto maps = horn_maps(*x, g, 0);
  REQUIRE_FALSE(maps.empty());
  for (const auto& h : maps) CHECK(fillers(*x, h).size() == 1);
}

TEST_CASE("reconstruction from a nerve recovers the properad") {
  auto index = bound3();
  const FiniteProperad p = small_properad();
  auto x = nerve_set(index, p);
  const NerveReport r = is_nerve(*x, 3);
  CHECK(r.report.ok);
  REQUIRE(r.properad.has_value());
  const FiniteProperad& q = *r.properad;
  CHECK(q.colors.size() == p.colors.size());
  std::multiset<std::size_t> ours;
  std::multiset<std::size_t> theirs;
  for (const auto& [b, ops] : p.ops) ours.insert(ops.size());
  for (const auto& [b, ops] : q.ops) theirs.insert(ops.size());
  CHECK(ours == theirs);
  CHECK(check_properad_axioms(q, 3).ok);
}

TEST_CASE("an empty graphical set is the nerve of the empty properad") {
  auto index = shapes(2, 2, 2);
  TabulatedSet empty(index);
  const NerveReport r = is_nerve(empty, 2);
  CHECK(r.report.ok);
  REQUIRE(r.properad.has_value());
  CHECK(r.properad->colors.empty());
  CHECK(r.properad->ops.empty());
}

TEST_CASE("a punctured nerve fails every check with witnesses") {
  auto index = bound3();
  auto base = nerve_set(index, small_properad());
  const std::size_t g = shape(*index, double_edge());
  REQUIRE_FALSE(base->elements(g).empty());
  const std::string victim = base->elements(g).front();
  auto x = puncture(base, g, victim);
  CHECK(x->elements(g).size() + 1 == base->elements(g).size());

  const auto segal = is_segal(*x, 3);
  CHECK_FALSE(segal.ok);
  REQUIRE_FALSE(segal.witnesses.empty());
  CHECK(segal.witnesses[0].check == "segal-surjective");

  const auto kan = has_unique_inner_fillers(*x, 3);
  CHECK_FALSE(kan.ok);
  REQUIRE_FALSE(kan.witnesses.empty());
  CHECK(kan.witnesses[0].check == "inner-kan");

  // The horn map of the removed element is left without a filler.
  const auto& faces = index->horn_faces(g, 0);
  HornMap h{g, 0, {}};
  for (const auto& f : faces) h.values.push_back(base->restrict(f.map, victim));
  CHECK(is_natural(*x, h));
  CHECK(fillers(*x, h).empty());

  CHECK_FALSE(is_nerve(*x, 3).report.ok);
  CHECK(check_functoriality(*x, 3).ok);
}

TEST_CASE("a padded nerve fails every check with witnesses") {
  auto index = bound3();
  auto base = nerve_set(index, small_properad());
  const std::size_t g = shape(*index, double_edge());
  auto x = pad(base, g, base->elements(g).front());
  CHECK(x->elements(g).size() > base->elements(g).size());

  const auto segal = is_segal(*x, 3);
  CHECK_FALSE(segal.ok);
  REQUIRE_FALSE(segal.witnesses.empty());
  CHECK(segal.witnesses[0].check == "segal-injective");

  const auto kan = has_unique_inner_fillers(*x, 3);
  CHECK_FALSE(kan.ok);
  REQUIRE_FALSE(kan.witnesses.empty());
  CHECK(kan.witnesses[0].check == "unique-filler");

  CHECK_FALSE(is_nerve(*x, 3).report.ok);
  CHECK(check_functoriality(*x, 3).ok);
}

TEST_CASE("tabulated copies restrict through generator factorizations") {
  auto index = shapes(2, 2, 2);
  auto x = nerve_set(index, small_properad());
  auto t = tabulate(*x);
  CHECK(check_functoriality(*t, 2).ok);
  // Maps that are not generators: every map out of L1 into L2.
  const std::size_t l1 = shape(*index, make_linear_graph(1));
  const std::size_t l2 = shape(*index, make_linear_graph(2));
  for (const auto& f : index->hom(l1, l2)) {
    for (const auto& e : x->elements(l2)) CHECK(t->restrict(f, e) == x->restrict(f, e));
  }
  CHECK(is_nerve(*t, 2).report.ok);
}

TEST_CASE("functoriality catches a corrupted action table") {
  auto index = shapes(2, 2, 2);
  auto t = tabulate(*nerve_set(index, small_properad()));
  const std::size_t g = shape(*index, double_edge());
  const auto& face = index->faces(g)[0];
  auto entry = t->actions().at(arrow_key(*index, face.map));
  auto& table = entry.second;
  // Replace one value by a decoration with other leg colors; the legs are
  // also seen through the outer faces.
  const std::string old = table.begin()->second;
  auto colors = [](const std::string& e) { return e.substr(0, e.find('|')); };
  std::string replacement;
  for (const auto& e : t->elements(face.source)) {
    if (colors(e) != colors(old)) replacement = e;
  }
  REQUIRE_FALSE(replacement.empty());
  table.begin()->second = replacement;
  t->set_action(entry.first, table);
  const auto report = check_functoriality(*t, 2);
  CHECK_FALSE(report.ok);
  CHECK_FALSE(report.witnesses.empty());
}

TEST_CASE("representables of linear graphs are nerves, of parallel edges are not") {
  auto index = bound3();
  // Γ[L2] restricted to linear graphs is the simplex Δ[2], the nerve of [2].
  const NerveReport line = is_nerve(*representable(index, make_linear_graph(2)), 3);
  CHECK(line.report.ok);
  REQUIRE(line.properad.has_value());
  CHECK(line.properad->colors.size() == 3);

  // Joining the two vertices along one of the parallel edges is compatible
  // on corollas but has no image in the graph.
  const auto parallel = representable(index, double_edge());
  const CheckReport segal = is_segal(*parallel, 3);
  CHECK_FALSE(segal.ok);
  REQUIRE_FALSE(segal.witnesses.empty());
  CHECK(segal.witnesses[0].check == "segal-surjective");
  CHECK_FALSE(is_nerve(*parallel, 3).report.ok);
  CHECK_FALSE(has_unique_inner_fillers(*parallel, 3).ok);
}
