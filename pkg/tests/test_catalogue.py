import pytest

from defcohom import io
from defcohom.catalogue import TAGS, Expected, catalogue, run, run_entry

CAT = catalogue()


def test_catalogue_contents():
    names = set(CAT)
    for g in ("abelian-R1", "abelian-R2", "abelian-R3", "so3", "sl2", "heisenberg", "aff1"):
        assert f"lie-{g}" in names and f"linear-poisson-{g}" in names
    for g in ("unit-3", "Z2", "Z3", "pair-2", "pair-3", "Z2-on-2"):
        assert f"groupoid-{g}" in names
    assert {"abelian-R2-zero-poisson", "abelian-R3-zero-poisson", "so3-rigidity",
            "two-row-synthetic", "proper-7term-synthetic", "cone-les-synthetic"} <= names


def test_tags_are_valid():
    for e in CAT.values():
        assert e.expected
        assert all(x.tag in TAGS for x in e.expected.values())
    with pytest.raises(ValueError):
        Expected(1, "GUESS")


def test_payloads_parse_as_their_kind():
    for e in CAT.values():
        if e.kind in ("lie-algebra", "groupoid", "poisson"):
            kind, _ = io.parse_any(e.payload)
            assert kind == {"lie-algebra": "lie", "groupoid": "groupoid", "poisson": "multivector"}[e.kind]


@pytest.mark.parametrize("name", sorted(CAT))
def test_entry_passes(name):
    checks = run_entry(CAT[name])
    assert checks
    bad = [(c.quantity, c.expected, c.actual) for c in checks if not c.passed]
    assert not bad


def test_seeded_entries_depend_on_seed():
    a, b = catalogue(0)["cone-les-synthetic"], catalogue(1)["cone-les-synthetic"]
    assert a.payload != b.payload
    assert catalogue(0)["cone-les-synthetic"].payload == a.payload


def test_parallel_run_matches_serial():
    names = ["lie-so3", "groupoid-Z3", "cone-les-synthetic"]
    key = lambda cs: [(c.entry, c.quantity, c.expected, c.actual, c.tag) for c in cs]
    assert key(run(names, jobs=2)) == key(run(names, jobs=1))


def test_unknown_entry():
    with pytest.raises(KeyError):
        run(["missing"])
