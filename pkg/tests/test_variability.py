"""Implicit VP derivation, occupations, and variant dependencies."""

from __future__ import annotations

import random

import pytest

from vrpweave import load_model
from vrpweave.errors import (
    AlreadyOccupiedError,
    ImplicitBindingError,
    KindMismatchError,
    UnoccupiedEndpointError,
)
from vrpweave.model import Dependency, ProcessElement, Variant, find_elements
from vrpweave.variability import (
    ORIGIN_MANUAL,
    Occupation,
    OccupationSet,
    advice_origin,
    check_dependencies,
    derive_implicit_varpoints,
    realize_dependency,
    varpoint_population,
)

from .oracles import closed_form_total, slot_walk_counts
from .randgen import random_model


def test_empty_model_has_no_implicit_vps():
    assert derive_implicit_varpoints(load_model('process "P" {}')) == ()


def test_single_task_slots():
    model = load_model('''process "P" {
      product "Doc"
      product "Out"
      role "Hand"
      task 1 "T" {
        input "Doc"
        output "Out"
        role "Hand"
      }
    }''')
    names = [vp.name for vp in derive_implicit_varpoints(model)]
    assert names == ["execution@1", "use@1#in0", "create@1#out0",
                     "access@1#role0", "init@Doc"]


def test_full_fixture_census(full_model):
    implicit = derive_implicit_varpoints(full_model)
    assert len(implicit) == 24
    expected = {"execution": 8, "call": 1, "use": 3, "create": 3,
                "access": 5, "init": 2, "deliver": 2}
    assert slot_walk_counts(full_model) == expected
    by_kind: dict[str, int] = {}
    for vp in implicit:
        by_kind[vp.kind] = by_kind.get(vp.kind, 0) + 1
    assert by_kind == expected


def test_full_fixture_population_is_ordered(full_model):
    population = varpoint_population(full_model)
    names = [vp.name for vp in population]
    # explicit VPs appear at their authored positions, after the owner's
    # execution slot and its earlier body entries
    assert names.index("execution@1.2.1") < names.index("vp_rationale")
    assert names.index("vp_rationale") < names.index("vp_reqs_in_design")
    assert names.index("execution@1.2.2.1") < names.index("vpt")
    assert len(set(names)) == len(names)


def test_census_matches_closed_form_on_random_models():
    rng = random.Random(101)
    for _ in range(150):
        model = random_model(rng)
        implicit = derive_implicit_varpoints(model)
        assert len(implicit) == closed_form_total(model)
        by_kind: dict[str, int] = {}
        for vp in implicit:
            by_kind[vp.kind] = by_kind.get(vp.kind, 0) + 1
        walk = slot_walk_counts(model)
        assert by_kind == {k: v for k, v in walk.items() if v}


def test_deliverable_never_produced_gets_no_deliver_vp():
    model = load_model('''process "P" {
      product "Shelfware" deliverable
      task 1 "T" {
        input "Shelfware"
      }
    }''')
    kinds = [vp.kind for vp in derive_implicit_varpoints(model)]
    assert "deliver" not in kinds


def test_multi_producer_deliverable_gets_one_deliver_vp_at_first_slot():
    model = load_model('''process "P" {
      product "Ship" deliverable
      task 1 "A" {
        output "Ship"
      }
      task 2 "B" {
        output "Ship"
      }
    }''')
    delivers = [vp for vp in derive_implicit_varpoints(model) if vp.kind == "deliver"]
    assert [vp.name for vp in delivers] == ["deliver@1#out0"]


def test_derivation_is_deterministic(full_model):
    assert derive_implicit_varpoints(full_model) == derive_implicit_varpoints(full_model)


def test_generated_names_are_disjoint_from_authored(full_model):
    population = varpoint_population(full_model)
    implicit = {vp.name for vp in population if vp.is_implicit}
    explicit = {vp.name for vp in population if not vp.is_implicit}
    assert not implicit & explicit
    assert all("@" in name for name in implicit)
    assert all("@" not in name and "#" not in name for name in explicit)


def test_find_elements_on_full_fixture(full_model):
    tasks = find_elements(full_model, "task", "1.2.2*")
    assert [t.id for t in tasks] == ["1.2.2.1", "1.2.2.2"]
    activities = find_elements(full_model, "activity", "*")
    assert [a.id for a in activities] == ["1.2", "1.2.1", "1.2.2", "1.2.3"]
    assert find_elements(load_model('process "E" {}'), "task", "*") == []


# --- occupations -------------------------------------------------------------

def _pilot_vps(pilot_model):
    population = varpoint_population(pilot_model)
    return {vp.name: vp for vp in population}


def _variants(pilot_model):
    return {v.name: v for v in pilot_model.variants}


def test_occupy_records_and_rejects_duplicates(pilot_model):
    vps = _pilot_vps(pilot_model)
    variants = _variants(pilot_model)
    occupations = OccupationSet()
    occupations = occupations.occupy(vps["vpt"], variants["Analyze HW SW Interaction"],
                                     advice_origin("satellite2"))
    occupations = occupations.occupy(vps["vpw"], variants["FMECA"],
                                     advice_origin("satellite2"))
    assert [o.varpoint for o in occupations] == ["vpt", "vpw"]
    with pytest.raises(AlreadyOccupiedError):
        occupations.occupy(vps["vpt"], variants["Analyze HW SW Interaction"],
                           ORIGIN_MANUAL)


def test_occupy_kind_mismatch(pilot_model):
    vps = _pilot_vps(pilot_model)
    variants = _variants(pilot_model)
    with pytest.raises(KindMismatchError):
        OccupationSet().occupy(vps["vpt"], variants["FMECA"], ORIGIN_MANUAL)
    with pytest.raises(KindMismatchError):
        OccupationSet().occupy(vps["vpw"], variants["Analyze HW SW Interaction"],
                               ORIGIN_MANUAL)


def test_manual_binding_to_implicit_vp_is_rejected(pilot_model):
    vps = _pilot_vps(pilot_model)
    variants = _variants(pilot_model)
    with pytest.raises(ImplicitBindingError):
        OccupationSet().occupy(vps["execution@1.2.2"],
                               variants["Analyze HW SW Interaction"], ORIGIN_MANUAL)
    # advice-originated occupations may target implicit VPs
    result = OccupationSet().occupy(vps["execution@1.2.2"],
                                    variants["Analyze HW SW Interaction"],
                                    advice_origin("satellite2"))
    assert len(result) == 1


def test_random_occupations_respect_kind_table():
    rng = random.Random(33)
    from vrpweave.model import PAYLOAD_VP_KINDS

    for _ in range(60):
        model = random_model(rng)
        population = varpoint_population(model)
        if not population:
            continue
        vp = rng.choice(population)
        variant = rng.choice(model.variants)
        origin = advice_origin("a")
        compatible = vp.kind in PAYLOAD_VP_KINDS[variant.payload.kind]
        try:
            OccupationSet().occupy(vp, variant, origin)
            accepted = True
        except KindMismatchError:
            accepted = False
        assert accepted == compatible


# --- dependencies -------------------------------------------------------------

_DEP = Dependency(source="Analyze HW SW Interaction", target="FMECA",
                  realize_edge="output")


def _occ(*variant_names):
    return tuple(Occupation(varpoint=f"vp{i}", variant=name, origin="manual")
                 for i, name in enumerate(variant_names))


def test_dependencies_consistent_when_both_placed():
    assert check_dependencies(_occ("Analyze HW SW Interaction", "FMECA"), (_DEP,)) == ()


def test_dependency_violation_names_the_missing_variant():
    violations = check_dependencies(_occ("Analyze HW SW Interaction"), (_DEP,))
    assert len(violations) == 1
    assert violations[0].missing == "FMECA"


def test_no_dependencies_is_consistent():
    assert check_dependencies(_occ("anything"), ()) == ()


def test_target_only_occupation_is_consistent():
    assert check_dependencies(_occ("FMECA"), (_DEP,)) == ()


def _variant_pair():
    task = Variant("Tsk", ProcessElement(id="", name="Tsk", kind="task"))
    product = Variant("Doc", ProcessElement(id="Doc", name="Doc", kind="work_product"))
    other = Variant("Other", ProcessElement(id="", name="Other", kind="task"))
    return {"Tsk": task, "Doc": product, "Other": other}


def test_realize_output_attaches_product_to_work_unit():
    variants = _variant_pair()
    dep = Dependency(source="Tsk", target="Doc", realize_edge="output")
    edge = realize_dependency(dep, _occ("Tsk", "Doc"), variants)
    assert (edge.host, edge.kind, edge.target) == ("Tsk", "output", "Doc")
    # reversed declaration order lands on the same host
    dep_rev = Dependency(source="Doc", target="Tsk", realize_edge="output")
    edge_rev = realize_dependency(dep_rev, _occ("Tsk", "Doc"), variants)
    assert (edge_rev.host, edge_rev.target) == ("Tsk", "Doc")


def test_realize_invokes_is_reversed():
    variants = _variant_pair()
    dep = Dependency(source="Tsk", target="Other", realize_edge="invokes")
    edge = realize_dependency(dep, _occ("Tsk", "Other"), variants)
    assert (edge.host, edge.kind, edge.target) == ("Other", "invokes", "Tsk")


def test_realize_requires_both_endpoints():
    variants = _variant_pair()
    dep = Dependency(source="Tsk", target="Doc", realize_edge="output")
    with pytest.raises(UnoccupiedEndpointError):
        realize_dependency(dep, _occ("Tsk"), variants)
