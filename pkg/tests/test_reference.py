import copy

import pytest

from qweyl.reference import (
    GROUPS,
    REFERENCE,
    audit,
    compare,
    compare_all,
    engine_value,
    load_curated,
    reference_value,
    term_map,
)


class TestReferenceTable:
    def test_groups_cover_the_table(self):
        names = {n for group in GROUPS.values() for n in group}
        assert names == set(REFERENCE)

    def test_beta_family_by_substitution(self):
        text = REFERENCE["beta_3"].text
        assert "x3" in text and "x1" not in text

    def test_reference_parses(self):
        for name in REFERENCE:
            assert term_map(reference_value(name, 2))


class TestCompare:
    def test_first_order_momentum_matches(self):
        for name in ("P_X", "P_Y", "P_Z"):
            assert compare(name, 1).status == "match"

    def test_first_order_field_matches(self):
        for name in ("B_x", "B_y", "B_z"):
            assert compare(name, 1).status == "match"

    def test_beta_constant_is_the_only_beta_difference(self):
        comp = compare("beta_1", 2)
        assert [(t.term, t.engine, t.reference) for t in comp.terms] == [("theta^2", "0", "(-1/3)")]

    def test_engine_and_reference_agree_classically(self):
        for name in REFERENCE:
            comp = compare(name, 0)
            assert not [t for t in comp.terms if t.status == "mismatch"]
            # the field vanishes classically, so nothing is left to compare
            assert comp.status == ("not-comparable" if name.startswith("B_") else "match")

    def test_engine_value_kinds(self):
        assert term_map(engine_value("P_Z", 2))
        with pytest.raises(KeyError):
            engine_value("Q", 2)


class TestAudit:
    @pytest.mark.parametrize("order", [0, 1, 2, 3])
    def test_curated_file_covers_every_mismatch(self, order):
        result = audit(compare_all(order))
        assert result["pass"], result

    def test_uncurated_mismatch_fails(self):
        curated = load_curated()[1:]
        result = audit(compare_all(2), curated)
        assert not result["pass"]
        assert len(result["uncurated"]) == 1

    def test_stale_entry_fails(self):
        curated = copy.deepcopy(load_curated())
        curated.append(dict(curated[0], term="theta^2*x1", reference="(7/5)"))
        result = audit(compare_all(2), curated)
        assert not result["pass"]
        assert len(result["stale"]) == 1

    def test_reasons_are_attached(self):
        comps = compare_all(2)
        audit(comps)
        assert all(t.reason for c in comps for t in c.terms if t.status == "mismatch")

    def test_entries_are_unique(self):
        keys = [(c["expression"], c["term"], c["engine"], c["reference"]) for c in load_curated()]
        assert len(keys) == len(set(keys)) == 17
