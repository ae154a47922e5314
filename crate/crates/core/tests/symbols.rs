use setlog::goal::Sym;
#[test]
fn complement_is_an_involution() {
    for &s in Sym::ALL {
        if let Some(c) = s.complement() {
            assert_eq!(c.complement(), Some(s), "{:?}", s);
        }
    }
}

#[test]
fn prefix_lookup_respects_arity() {
    assert_eq!(Sym::from_prefix("un", 3), Some(Sym::Un));
    assert_eq!(Sym::from_prefix("un", 2), None);
    assert_eq!(Sym::from_prefix("npair", 1), None);
    assert!(Sym::is_prefix_name("applyTo"));
}

#[test]
fn seq_and_foreach_have_no_complement() {
    assert!(Sym::Foreach.complement().is_none());
    assert!(Sym::Concat.complement().is_none());
    assert_eq!(Sym::Le.complement(), Some(Sym::Gt));
}
