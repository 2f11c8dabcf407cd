import pytest

import milsem

OMEGA = "app(lam(x,app(var(x),var(x))),lam(x,app(var(x),var(x))))"


def test_scenarios_are_shipped():
    assert set(milsem.scenario_names()) >= {"pairs", "lists", "conditionals", "lazy_eager"}


def test_parse_round_trip():
    assert milsem.parse_term("f( X , g(a) )") == "f(X,g(a))"
    with pytest.raises(milsem.ParseError):
        milsem.parse_term("f(")
    with pytest.raises(ValueError):
        milsem.parse_term("f(")


def test_learn_pairs_and_evaluate():
    r = milsem.learn_scenario("pairs")
    assert r["status"] == "found" and r["size"] == 5
    term = "app(lam(x,fst(var(x))),pair(app(lam(x,pair(app(lam(z,var(z)),var(x)),var(y))),var(z)),var(x)))"
    assert milsem.evaluate(r["program"], term) == ("Proved", "pair(var(z),var(y))")
    assert milsem.evaluate(r["program"], OMEGA) == ("DepthExceeded", None)
    assert milsem.query(r["program"], "step(fst(var(a)),X)") == []


def test_too_few_clauses():
    r = milsem.learn(milsem.scenario_text("pairs"), max_clauses=1)
    assert r["status"] == "no_hypothesis" and r["clauses"] == []


def test_chain():
    names = ["pairs", "lists", "conditionals", "lazy_eager"]
    r = milsem.learn_chain([(n, milsem.scenario_text(n)) for n in names])
    assert r["failed_task"] is None
    assert 20 <= r["induced"] <= 30
    rep = milsem.check(r["program"], [OMEGA, "if(true,thenelse(nil,false))", "head(cons(lit(3),nil))"])
    assert rep["violations"] == [] and rep["checked"] == 3


def test_reference_and_substitution():
    assert milsem.reference_eval(OMEGA, fuel=100) == ("bottom", None)
    assert milsem.reference_eval("app(lam(x,var(y)),%s)" % OMEGA, strategy="lazy") == ("value", "var(y)")
    assert milsem.reference_eval("fst(lam(x,var(x)))")[0] == "stuck"
    assert milsem.substitute("var(y)", "x", "lam(y,app(var(x),var(y)))") == "lam(y1,app(var(y),var(y1)))"
