use setlog::term::{Substitution, Term, VarGen};
#[test]
fn fresh_names_are_distinct() {
    let mut g = VarGen::new();
    let a = g.fresh("N");
    let b = g.fresh("N");
    assert_ne!(a, b);
    assert_ne!(a.name(), b.name());
    assert_eq!(a.name(), "_N1");
}

#[test]
fn fresh_skips_parsed_names() {
    let mut g = VarGen::new();
    g.named("_N1");
    let v = g.fresh("N");
    assert_ne!(v.name(), "_N1");
}

#[test]
fn apply_replaces_bound_variables() {
    let mut g = VarGen::new();
    let x = g.named("X");
    let mut s = Substitution::new();
    s.bind(&x, Term::atom("maxi"));
    let t = Term::set([Term::Var(x)]);
    assert_eq!(s.apply(&t), Term::set([Term::atom("maxi")]));
}

#[test]
fn apply_nested_set() {
    let mut g = VarGen::new();
    let (x, y, z) = (g.named("X"), g.named("Y"), g.named("Z"));
    let mut s = Substitution::new();
    s.bind(&x, Term::cons(Term::atom("a"), Term::Var(y.clone())));
    let t = Term::cons(Term::Var(x), Term::Var(z.clone()));
    let expected = Term::cons(Term::cons(Term::atom("a"), Term::Var(y)), Term::Var(z));
    assert_eq!(s.apply(&t), expected);
}

#[test]
fn empty_substitution_is_identity() {
    let mut g = VarGen::new();
    let t = Term::cons(Term::Var(g.named("X")), Term::Empty);
    assert_eq!(Substitution::new().apply(&t), t);
}

#[test]
fn set_parts_and_tail() {
    let mut g = VarGen::new();
    let x = g.named("X");
    let t = Term::set_with_tail([Term::Int(1), Term::Int(2)], Term::Var(x.clone()));
    let (elems, tail) = t.set_parts();
    assert_eq!(elems, vec![&Term::Int(1), &Term::Int(2)]);
    assert_eq!(tail, &Term::Var(x.clone()));
    assert!(!t.occurs_in_element(&x));
    assert!(t.contains_var(&x));
}
