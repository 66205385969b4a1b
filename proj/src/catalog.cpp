#include "ksph/catalog.hpp"
#include "ksph/linalg.hpp"

#include <algorithm>

namespace ksph {

using namespace linalg;

std::string expected_status_name(ExpectedStatus s) {
    switch (s) {
    case ExpectedStatus::stable: return "stable";
    case ExpectedStatus::not_semistable: return "not_semistable";
    case ExpectedStatus::not_ke_but_soliton: return "not_ke_but_soliton";
    case ExpectedStatus::unstable: return "unstable";
    }
    return "?";
}

namespace {

Rat q(long num, long den = 1) { return Rat(num, den); }

QVec vec(std::initializer_list<Rat> xs) { return QVec(xs); }

// --- shared frames -------------------------------------------------------

// rank-one SL2 frame: coordinates in units of rho, kappa(alpha,alpha)=2
RootSystemData sl2_frame() {
    return make_root_system({vec({q(2)})}, {vec({q(2)})}, {{q(1, 2)}});
}

// GL2 figure frame: root drawn as (1,-1), standard form
RootSystemData gl2_frame() {
    return make_root_system({vec({q(1), q(-1)})}, {vec({q(1), q(-1)})},
                            {{q(1), q(0)}, {q(0), q(1)}});
}

// SO4 figure frame: roots drawn as (1,1) and (1,-1)
RootSystemData so4_frame() {
    return make_root_system({vec({q(1), q(1)}), vec({q(1), q(-1)})},
                            {vec({q(1), q(1)}), vec({q(1), q(-1)})},
                            {{q(1), q(0)}, {q(0), q(1)}});
}

// A2 figures drawn in the triangular lattice; the vertical axis is
// rescaled by 1/sqrt(3) to keep the data rational, making the invariant
// form diag(1,3). Simple roots (3/2,-1/2) and (0,1).
RootSystemData a2_frame() {
    QVec a = vec({q(3, 2), q(-1, 2)});
    QVec b = vec({q(0), q(1)});
    QVec ab = add(a, b);
    return make_root_system({a, b}, {a, ab, b}, {{q(1), q(0)}, {q(0), q(3)}});
}

// G2 figure frame under the same vertical rescaling; simple roots are the
// short (1,0) and the long (-3/2,1/2).
RootSystemData g2_frame() {
    QVec a1 = vec({q(1), q(0)});
    QVec a2 = vec({q(-3, 2), q(1, 2)});
    QMat pos = {a1,
                add(a1, a2),
                add(scale(q(2), a1), a2),
                add(scale(q(3), a1), a2),
                add(scale(q(3), a1), scale(q(2), a2)),
                a2};
    return make_root_system({a1, a2}, pos, {{q(1), q(0)}, {q(0), q(3)}});
}

ValuationConeData gl2_cone() {
    return ValuationConeData::make({vec({q(1), q(-1)})}, {vec({q(1), q(1)})},
                                   {vec({q(1), q(0)}), vec({q(0), q(1)})});
}

ValuationConeData so4_cone() {
    return ValuationConeData::make({vec({q(1), q(1)}), vec({q(1), q(-1)})}, {},
                                   {vec({q(1), q(0)}), vec({q(0), q(1)})});
}

// dominant chamber of the rescaled A2 frame: rays (1,0) and (1,3)
ValuationConeData a2_cone(QMat m_minus) {
    return ValuationConeData::make({vec({q(1), q(0)}), vec({q(1), q(3)})}, {},
                                   std::move(m_minus));
}

ValuationConeData g2_cone() {
    return ValuationConeData::make({vec({q(0), q(1)}), vec({q(1), q(3)})}, {},
                                   {vec({q(1), q(0)}), vec({q(-3, 2), q(1, 2)})});
}

CatalogEntry make_entry(std::string name, RootSystemData rs, QMat vertices,
                        ValuationConeData cone, unsigned multiplicity,
                        ExpectedStatus status, std::optional<QVec> bar,
                        std::string note) {
    CatalogEntry e;
    e.name = std::move(name);
    e.datum = SphericalDatum::make(rs, MomentPolytope::from_vertices(vertices),
                                   std::move(cone), rs.positive_roots, multiplicity,
                                   std::nullopt);
    e.expected_status = status;
    e.expected_barycenter = std::move(bar);
    e.source_note = std::move(note);
    return e;
}

CatalogEntry build(const std::string& name) {
    const std::string a2_note =
        "A2 figure frame with the drawn vertical axis rescaled by 1/sqrt(3); "
        "form diag(1,3), simple roots (3/2,-1/2),(0,1)";
    if (name == "p1xp1_sl2") {
        CatalogEntry e;
        RootSystemData rs = sl2_frame();
        e.name = name;
        e.datum = SphericalDatum::make(
            rs, MomentPolytope::from_vertices({vec({q(0)}), vec({q(4)})}),
            ValuationConeData::make({vec({q(1)})}, {}, {vec({q(1)})}),
            rs.positive_roots, 1, std::nullopt);
        e.expected_status = ExpectedStatus::stable;
        e.expected_barycenter = vec({q(8, 3)});
        e.source_note = "P1 x P1 under diagonal SL2; segment [0,4] in rho units";
        return e;
    }
    if (name == "p2_sl2") {
        CatalogEntry e;
        RootSystemData rs = sl2_frame();
        e.name = name;
        e.datum = SphericalDatum::make(
            rs, MomentPolytope::from_vertices({vec({q(0)}), vec({q(6)})}),
            ValuationConeData::make({vec({q(1)})}, {}, {vec({q(4)})}),
            rs.positive_roots, 1, std::nullopt);
        e.expected_status = ExpectedStatus::stable;
        e.expected_barycenter = vec({q(4)});
        e.source_note = "P2 under SL2 acting on binary quadrics; segment [0,6] in rho units";
        return e;
    }
    if (name == "gl2_cpt_1")
        return make_entry(name, gl2_frame(),
                          {vec({q(-2), q(-2)}), vec({q(2), q(2)}), vec({q(2), q(-2)})},
                          gl2_cone(), 2, ExpectedStatus::stable,
                          vec({q(6, 5), q(-6, 5)}),
                          "first GL2 compactification figure; frame root (1,-1)");
    if (name == "gl2_cpt_2")
        return make_entry(name, gl2_frame(),
                          {vec({q(2), q(2)}), vec({q(2), q(-1)}), vec({q(1), q(-2)}),
                           vec({q(-2), q(-2)})},
                          gl2_cone(), 2, ExpectedStatus::stable,
                          vec({q(36, 35), q(-36, 35)}),
                          "second GL2 compactification figure");
    if (name == "gl2_cpt_3")
        return make_entry(name, gl2_frame(),
                          {vec({q(2), q(-1)}), vec({q(2), q(-2)}), vec({q(1), q(-2)}),
                           vec({q(-1, 2), q(-1, 2)}), vec({q(1, 2), q(1, 2)})},
                          gl2_cone(), 2, ExpectedStatus::stable,
                          vec({q(2343, 1750), q(-2343, 1750)}),
                          "third GL2 compactification figure (toroidal); "
                          "barycenter printed in the source");
    if (name == "gl2_cpt_4")
        return make_entry(name, gl2_frame(),
                          {vec({q(2), q(2)}), vec({q(2), q(-2)}), vec({q(1), q(-2)}),
                           vec({q(-1, 2), q(-1, 2)})},
                          gl2_cone(), 2, ExpectedStatus::not_ke_but_soliton,
                          vec({q(6063, 4310), q(-4767, 4310)}),
                          "fourth GL2 compactification figure");
    if (name == "gl2_cpt_5")
        return make_entry(name, gl2_frame(),
                          {vec({q(2), q(-1)}), vec({q(2), q(-3)}), vec({q(-1, 2), q(-1, 2)}),
                           vec({q(1, 2), q(1, 2)})},
                          gl2_cone(), 2, ExpectedStatus::not_ke_but_soliton,
                          vec({q(3999, 2720), q(-4647, 2720)}),
                          "fifth GL2 compactification figure (toroidal)");
    if (name == "gl2_cpt_6")
        return make_entry(name, gl2_frame(),
                          {vec({q(-1, 2), q(-1, 2)}), vec({q(2), q(2)}), vec({q(2), q(-3)})},
                          gl2_cone(), 2, ExpectedStatus::not_ke_but_soliton,
                          vec({q(3, 2), q(-3, 2)}),
                          "sixth GL2 compactification figure as drawn; the source "
                          "prose calls it non-Einstein but the drawn triangle has "
                          "exact central margin 0 and positive ray margin, hence "
                          "checks as stable (see regression notes)");
    if (name == "so4_cpt_1")
        return make_entry(name, so4_frame(),
                          {vec({q(3), q(3)}), vec({q(0), q(0)}), vec({q(3), q(-3)})},
                          so4_cone(), 2, ExpectedStatus::stable,
                          vec({q(18, 7), q(0)}),
                          "first SO4 compactification figure; roots (1,1),(1,-1)");
    if (name == "so4_cpt_2")
        return make_entry(name, so4_frame(),
                          {vec({q(3), q(3)}), vec({q(3), q(0)}), vec({q(3, 2), q(-3, 2)}),
                           vec({q(0), q(0)})},
                          so4_cone(), 2, ExpectedStatus::unstable,
                          vec({q(489, 196), q(15, 28)}),
                          "second SO4 compactification figure; finite equivariant "
                          "automorphisms, no soliton");
    if (name == "so4_cpt_3")
        return make_entry(name, so4_frame(),
                          {vec({q(3), q(3)}), vec({q(3), q(1)}), vec({q(2), q(-1)}),
                           vec({q(3, 2), q(-3, 2)}), vec({q(0), q(0)})},
                          so4_cone(), 2, ExpectedStatus::unstable,
                          vec({q(102741, 43004), q(16575, 23156)}),
                          "third SO4 compactification figure; finite equivariant "
                          "automorphisms, no soliton");
    if (name == "complete_conics")
        return make_entry(name, a2_frame(),
                          {vec({q(3), q(3)}), vec({q(6), q(2)}), vec({q(6), q(0)}),
                           vec({q(0), q(0)})},
                          a2_cone({vec({q(3), q(-1)}), vec({q(0), q(2)})}), 1,
                          ExpectedStatus::stable, vec({q(311, 68), q(311, 204)}),
                          "variety of complete conics, SL3/N(SO3); " + a2_note +
                              "; M_- = twice the root lattice");
    if (name == "sl3_so3_picard1")
        return make_entry(name, a2_frame(),
                          {vec({q(3), q(3)}), vec({q(6), q(0)}), vec({q(0), q(0)})},
                          a2_cone({vec({q(2), q(0)}), vec({q(1), q(1)})}), 1,
                          ExpectedStatus::stable, vec({q(15, 4), q(5, 4)}),
                          "Picard-one SL3/SO3 embedding; " + a2_note +
                              "; M_- = twice the weight lattice");
    if (name == "g2_cpt")
        return make_entry(name, g2_frame(),
                          {vec({q(7, 2), q(7, 2)}), vec({q(0), q(0)}), vec({q(0), q(7, 2)})},
                          g2_cone(), 2, ExpectedStatus::stable,
                          vec({q(139601, 79360), q(49, 15)}),
                          "Picard-one G2 compactification; G2 figure frame with the "
                          "vertical axis rescaled by 1/sqrt(3); M_- = root lattice");
    if (name == "sl3_cpt")
        return make_entry(name, a2_frame(),
                          {vec({q(5, 2), q(5, 2)}), vec({q(5), q(0)}), vec({q(0), q(0)})},
                          a2_cone({vec({q(1), q(0)}), vec({q(1, 2), q(1, 2)})}), 2,
                          ExpectedStatus::stable, vec({q(10, 3), q(10, 9)}),
                          "Picard-one SL3 compactification; " + a2_note +
                              "; M_- = weight lattice");
    throw input_error("unknown catalog entry '" + name + "'");
}

} // namespace

std::vector<std::string> list_entries() {
    return {"p1xp1_sl2",     "p2_sl2",     "gl2_cpt_1", "gl2_cpt_2", "gl2_cpt_3",
            "gl2_cpt_4",     "gl2_cpt_5",  "gl2_cpt_6", "so4_cpt_1", "so4_cpt_2",
            "so4_cpt_3",     "complete_conics", "sl3_so3_picard1", "g2_cpt",
            "sl3_cpt"};
}

CatalogEntry get_entry(const std::string& name) { return build(name); }

} // namespace ksph
