#include <map>
#include <set>

#include "common.hpp"
#include "properad/catalog.hpp"
#include "properad/gamma.hpp"
#include "properad/isomorphism.hpp"

namespace properad::acceptance {

namespace {

using GraphPtr = std::shared_ptr<const WiringGraph>;

// Which source edges f0 identifies: for each edge (in id order) the position
// of the first edge with the same image.
std::string kernel_key(const GammaMorphism& f) {
  std::map<EdgeId, std::size_t> first;
  std::string key;
  std::size_t i = 0;
  for (const auto& [e, x] : f.f0) {
    auto [it, inserted] = first.emplace(x, i);
    key += std::to_string(it->second) + ",";
    ++i;
  }
  return key;
}

std::string f0_key(const std::map<EdgeId, EdgeId>& f0) {
  std::string key;
  for (const auto& [e, x] : f0) key += e + "=" + x + ",";
  return key;
}

// f is invertible when some map back composes to both identities.
bool invertible(const GammaMorphism& f, const std::vector<GammaMorphism>& back, const GammaMorphism& id_source,
                const GammaMorphism& id_target) {
  for (const auto& b : back) {
    bool edges_ok = true;
    for (const auto& [e, x] : f.f0) {
      if (b.f0.at(x) != e) {
        edges_ok = false;
        break;
      }
    }
    if (!edges_ok) continue;
    if (same_morphism(compose(b, f), id_source) && same_morphism(compose(f, b), id_target)) return true;
  }
  return false;
}

bool identity_on_edges(const GammaMorphism& theta) {
  for (const auto& [e, x] : theta.f0) {
    if (e != x) return false;
  }
  return true;
}

struct Negative {
  std::size_t middle;
  GammaMorphism map;
};

}  // namespace

void criterion_reedy(Outcome& factorization, Outcome& axioms) {
  Stopwatch clock;
  CatalogOptions options;
  options.max_vertices = 3;
  options.max_edges = 6;
  const ShapeCatalog catalog(options);
  std::vector<GraphPtr> graphs;
  std::vector<HomTarget> targets;
  std::vector<GammaMorphism> identities;
  for (const auto& g : catalog.shapes()) {
    graphs.push_back(share(g));
    targets.emplace_back(graphs.back());
    identities.push_back(identity_morphism(graphs.back()));
  }
  const std::size_t n = graphs.size();

  // Automorphisms, decided by the existence of an inverse rather than by the
  // positive/negative classification under test.
  std::vector<std::vector<GammaMorphism>> automorphisms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ends = hom_set(graphs[i], targets[i]);
    for (const auto& f : ends) {
      if (invertible(f, ends, identities[i], identities[i])) automorphisms[i].push_back(f);
    }
  }

  // Every negative map, grouped by source and by the edges it identifies.  A
  // factorization f = p q with p positive (injective on edges) forces q to
  // identify exactly the edges f identifies, and since q is onto on edges it
  // also determines p on edges.
  // Factorizations through q and through theta q (theta an automorphism of the
  // middle) correspond, so one negative map per automorphism orbit suffices.
  std::vector<std::map<std::string, std::vector<Negative>>> negatives(n);
  for (std::size_t mi = 0; mi < n; ++mi) {
    for (std::size_t hi = 0; hi < n; ++hi) {
      if (graphs[mi]->num_vertices() > graphs[hi]->num_vertices()) continue;
      std::set<std::string> seen;
      for (auto& q : hom_set(graphs[hi], targets[mi])) {
        if (!is_negative(q) || seen.count(morphism_key(q))) continue;
        for (const auto& theta : automorphisms[mi]) seen.insert(morphism_key(compose(theta, q)));
        negatives[hi][kernel_key(q)].push_back({mi, std::move(q)});
      }
    }
  }

  Outcome fact_out;
  Outcome ax_out;
  std::size_t morphisms = 0;
  std::size_t alternatives = 0;
  std::size_t isos = 0;

  for (std::size_t gi = 0; gi < n; ++gi) {
    const GraphPtr& g = graphs[gi];
    std::vector<std::vector<GammaMorphism>> into(n);
    std::map<std::pair<std::size_t, std::string>, std::vector<const GammaMorphism*>> positives;
    for (std::size_t xi = 0; xi < n; ++xi) {
      into[xi] = hom_set(graphs[xi], targets[gi]);
      for (const auto& p : into[xi]) {
        if (is_positive(p)) positives[{xi, f0_key(p.f0)}].push_back(&p);
      }
    }

    for (std::size_t hi = 0; hi < n; ++hi) {
      const GraphPtr& h = graphs[hi];
      const std::string where = "[" + catalog.form(hi) + " -> " + catalog.form(gi) + "]";
      const auto dh = degree(*h);
      const auto dg = degree(*g);
      for (const auto& f : into[hi]) {
        ++morphisms;
        const bool pos = is_positive(f);
        const bool neg = is_negative(f);
        // Catalog entries are pairwise non-isomorphic, so invertible maps are
        // automorphisms.
        bool iso = false;
        if (hi == gi) {
          for (const auto& theta : automorphisms[gi]) iso = iso || same_morphism(theta, f);
        }
        if (iso) ++isos;

        // Axiom 1: degrees.
        if (iso && dh != dg) ax_out.fail("isomorphism changes degree " + where);
        if (pos && !iso && !(dh < dg)) ax_out.fail("positive non-iso does not raise degree " + where);
        if (neg && !iso && !(dh > dg)) ax_out.fail("negative non-iso does not lower degree " + where);
        // Axiom 2: positive and negative exactly when invertible.
        if ((pos && neg) != iso) ax_out.fail("positive-and-negative differs from invertible " + where);
        // Axiom 4: theta f = f with f negative forces theta = id.  Since f is
        // onto on edges, such theta fixes every edge.
        if (neg) {
          for (const auto& theta : automorphisms[gi]) {
            if (!identity_on_edges(theta)) continue;
            if (same_morphism(compose(theta, f), f) && !same_morphism(theta, identities[gi])) {
              ax_out.fail("nontrivial automorphism fixes a negative map " + where);
            }
          }
        }
        // Axiom 5: f theta = f with f positive forces theta = id.  Since f is
        // injective on edges, such theta fixes every edge.
        if (pos) {
          for (const auto& theta : automorphisms[hi]) {
            if (!identity_on_edges(theta)) continue;
            if (same_morphism(compose(f, theta), f) && !same_morphism(theta, identities[hi])) {
              ax_out.fail("nontrivial automorphism fixed by a positive map " + where);
            }
          }
        }

        // The constructed factorization.
        ReedyFactorization r;
        try {
          r = reedy_factorize(f);
        } catch (const std::exception& e) {
          fact_out.fail(std::string("factorization threw: ") + e.what() + " " + where);
          continue;
        }
        if (!same_morphism(compose(r.positive, r.negative), f)) fact_out.fail("g h != f " + where);
        if (!is_negative(r.negative)) fact_out.fail("h not negative " + where);
        if (!is_positive(r.positive)) fact_out.fail("g not positive " + where);
        if (!is_valid_gamma_morphism(r.negative) || !is_valid_gamma_morphism(r.positive)) {
          fact_out.fail("factor not in the graphical category " + where);
        }

        // Axiom 3: every factorization goes through an isomorphic middle.
        const std::string middle_form = canonical_form(*r.negative.target);
        const std::string f_key = morphism_key(f);
        bool found = false;
        const auto group = negatives[hi].find(kernel_key(f));
        if (group != negatives[hi].end()) {
          for (const auto& q : group->second) {
            std::map<EdgeId, EdgeId> p0;
            for (const auto& [e, x] : q.map.f0) p0[x] = f.f0.at(e);
            const auto candidates = positives.find({q.middle, f0_key(p0)});
            if (candidates == positives.end()) continue;
            for (const GammaMorphism* p : candidates->second) {
              ++alternatives;
              if (morphism_key(compose(*p, q.map)) != f_key) continue;
              found = true;
              if (catalog.form(q.middle) != middle_form) {
                fact_out.fail("factorization through a non-isomorphic middle object " + where);
                ax_out.fail("factorization not unique up to isomorphism " + where);
              }
            }
          }
        }
        if (!found) {
          fact_out.fail("exhaustive search found no factorization " + where);
          ax_out.fail("no factorization " + where);
        }
      }
    }
  }

  factorization = std::move(fact_out);
  axioms = std::move(ax_out);
  const std::string stats = std::to_string(n) + " graphs, " + std::to_string(morphisms) + " morphisms";
  factorization.detail = stats + ", " + std::to_string(alternatives) + " candidate factorizations composed, " +
                         std::to_string(static_cast<int>(clock.seconds())) + " s";
  if (clock.seconds() > 300) factorization.fail("runtime above 5 min");
  axioms.detail = stats + ", " + std::to_string(isos) + " isomorphisms";
}

}  // namespace properad::acceptance
