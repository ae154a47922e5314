//! Worked examples: parsing, solving, typing and proof goals.

use setlog::arith::ArithMode;
use setlog::engine::{Answer, Engine, EngineError};
use setlog::goal::{Constraint, Goal, Sym};
use setlog::solver::Store;
use setlog::syntax::{parse_goal, parse_program, Directive, Item, Printer};
use setlog::term::{Term, VarGen};
use setlog::verifier::{invariance_goal_text, negate_goal, InvarianceObligation};

const BB: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bb.slog");

fn all(e: &mut Engine, goal: &str, max: usize) -> Result<Vec<Answer>, EngineError> {
    e.query(goal)?.take(max).collect()
}

fn first(e: &mut Engine, goal: &str) -> Option<Answer> {
    all(e, goal, 1).unwrap().into_iter().next()
}

fn sat(goal: &str) -> bool {
    first(&mut Engine::new(), goal).is_some()
}

fn show(a: &Answer, name: &str) -> String {
    Printer::answer(true).term(a.binding(name).unwrap_or_else(|| panic!("{} unbound in {}", name, a)))
}

#[test]
fn duplicate_elements_are_kept_syntactically() {
    let g = parse_goal("S = {a,a}.", &mut VarGen::new()).unwrap();
    match g.goal {
        Goal::Constraint(c) => {
            let (elems, tail) = c.args[1].set_parts();
            assert_eq!(elems.len(), 2);
            assert_eq!(tail, &Term::Empty);
        }
        other => panic!("{}", other),
    }
    assert!(!sat("{1} neq {1,1}."));
}

#[test]
fn appendix_program_shape() {
    let text = std::fs::read_to_string(BB).unwrap();
    let p = parse_program(&text, &mut VarGen::new()).unwrap();
    let types = p.directives().filter(|d| matches!(d, Directive::DecType(..))).count();
    let sigs = p.directives().filter(|d| matches!(d, Directive::DecPType(..))).count();
    assert_eq!((types, sigs, p.clauses().count()), (2, 9, 9));
    assert!(parse_program("", &mut VarGen::new()).unwrap().items.is_empty());
    let mut e = Engine::new();
    e.consult_file(BB).unwrap();
    assert_eq!(e.db.names().len(), 9);
}

#[test]
fn quoted_atoms_lose_their_quotes() {
    let a = first(&mut Engine::new(), "X = 'Yo'.").unwrap();
    assert_eq!(a.binding("X"), Some(&Term::atom("Yo")));
}

#[test]
fn set_unification_enumerates_permutations() {
    let found = all(&mut Engine::new(), "{X,Y} = {1,2}.", 10).unwrap();
    let mut pairs: Vec<(String, String)> = found.iter().map(|a| (show(a, "X"), show(a, "Y"))).collect();
    pairs.sort();
    pairs.dedup();
    assert_eq!(pairs, vec![("1".into(), "2".into()), ("2".into(), "1".into())]);
    assert!(sat("{X,A} = {B,X}."));
    assert_eq!(all(&mut Engine::new(), "{} = {}.", 10).unwrap().len(), 1);
    assert!(!sat("X neq X."));
}

#[test]
fn posting_does_not_solve() {
    let mut gen = VarGen::new();
    let mut store = Store::new();
    for i in 0..10_000 {
        let x = gen.fresh("N");
        store.post(Constraint::new(Sym::In, vec![Term::Int(i), Term::Var(x)]));
    }
    assert_eq!(store.len(), 10_000);
}

#[test]
fn union_of_bound_sets() {
    let found = all(&mut Engine::new(), "un(A,B,C) & A = {1} & B = {2}.", 10).unwrap();
    assert!(!found.is_empty());
    assert!(found.iter().all(|a| show(a, "C") == "{1,2}"));
    let a = first(&mut Engine::new(), "un({},{m},K).").unwrap();
    assert_eq!(show(&a, "K"), "{m}");
    assert!(sat("un(A,{},A)."));
    assert_eq!(show(&first(&mut Engine::new(), "diff({1,2},{1},D).").unwrap(), "D"), "{2}");
}

#[test]
fn empty_goal_and_trivial_goals_print_true() {
    let a = first(&mut Engine::new(), "X = X.").unwrap();
    assert_eq!(a.render(&Printer::answer(false)), "true");
    let a = first(&mut Engine::new(), "set(X).").unwrap();
    assert_eq!(a.constraints.len(), 1);
    assert_eq!(a.constraints[0].sym, Sym::Set);
}

#[test]
fn size_needs_a_variable_or_constant() {
    assert!(!sat("size(A,X+1)."));
    assert!(sat("size(A,Y) & Y is X+1."));
}

#[test]
fn partial_functions() {
    assert!(sat("pfun({[maxi,160367],[caro,201166],[cami,290697],[alvaro,110400]})."));
    assert!(!sat("pfun({[maxi,160367],[maxi,201166],[cami,290697],[alvaro,110400]})."));
    assert_eq!(show(&first(&mut Engine::new(), "comp({},R,T).").unwrap(), "T"), "{}");
    let a = first(
        &mut Engine::new(),
        "B4 = {[maxi,160367],['Yo',201166],['Otro',201166]} & rres(B4,{160367},M) & dom(M,Card).",
    )
    .unwrap();
    assert_eq!(show(&a, "Card"), "{maxi}");
}

#[test]
fn local_application() {
    let a = first(&mut Engine::new(), "applyTo({[a,1],[b,2]},a,Y).").unwrap();
    assert_eq!(show(&a, "Y"), "1");
    assert!(!sat("applyTo({[a,1],[a,2]},a,Y)."));
    assert!(sat("applyTo({[a,1]},a,1)."));
}

#[test]
fn restricted_universal_quantifier() {
    assert!(sat("foreach(X in {}, 0 =< X)."));
    assert!(sat("foreach(X in {1,2,3}, 0 =< X)."));
    assert!(!sat("foreach(X in {3,-1}, 0 =< X)."));
    let a = first(&mut Engine::new(), "foreach(X in A, 0 =< X).").unwrap();
    assert_eq!(a.constraints.len(), 1);
}

#[test]
fn arithmetic_inside_sets() {
    let a = first(&mut Engine::new(), "Y = 10 & A = {X,Z} & Z is Y-4.").unwrap();
    assert_eq!(show(&a, "A"), Printer::answer(true).term(&Term::set([Term::Var(VarGen::new().named("X")), Term::Int(6)])));
    let a = first(&mut Engine::new(), "X = 1 & X_ is X+1.").unwrap();
    assert_eq!(show(&a, "X_"), "2");
    assert!(!sat("N >= 1 & N =< 0."));
}

#[test]
fn finite_domain_labeling() {
    let mut e = Engine::new();
    e.config.mode = ArithMode::FiniteDomain;
    let found = all(&mut e, "N in int(2,2).", 10).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(show(&found[0], "N"), "2");
    let a = first(&mut e, "Turn is 2*N+1.").unwrap();
    assert!(a.warnings.iter().any(|w| w.contains("non-finite domain")), "{:?}", a.warnings);
}

#[test]
fn summing_a_relation() {
    let mut e = Engine::new();
    e.consult_str("sum_ad({},0).\nsum_ad({[N,X]/S},Sum) :- [N,X] nin S & Sum is X + Sum1 & sum_ad(S,Sum1).")
        .unwrap();
    assert_eq!(e.db.lookup("sum_ad", 2).unwrap().len(), 2);
    let found = all(&mut e, "sum_ad({[1,10],[2,5]},S).", 20).unwrap();
    assert!(found.iter().any(|a| show(a, "S") == "15"));
}

#[test]
fn sequences() {
    assert!(sat("slist({[1,a],[2,b]})."));
    assert!(!sat("slist({[1,a],[3,b]})."));
    assert_eq!(show(&first(&mut Engine::new(), "head({[1,a],[2,b]},E).").unwrap(), "E"), "a");
    assert!(sat("T = {[1,a]} & concat({},T,U) & U = T."));
    let a = first(&mut Engine::new(), "add({[1,a]},b,T).").unwrap();
    assert_eq!(show(&a, "T"), "{[1,a],[2,b]}");
}

#[test]
fn syntax_errors_are_positioned() {
    let err = parse_program("foo(X) :- X in {1,2.", &mut VarGen::new()).unwrap_err();
    assert_eq!((err.line, err.col), (1, 20));
    let err = Engine::new().query("X = {1,2.").err().unwrap();
    assert!(matches!(err, EngineError::Syntax(_)), "{}", err);
}

fn typed_bb(mutate: impl Fn(String) -> String) -> Result<usize, EngineError> {
    let text = mutate(std::fs::read_to_string(BB).unwrap());
    let mut e = Engine::new();
    e.config.type_check = true;
    e.consult_str(&text)
}

#[test]
fn type_declarations() {
    assert!(typed_bb(|t| t).is_ok());
    let err = typed_bb(|t| t.replace("rres(Birthday,{Today_i},M) & dec(M,bb) &", "rres(Birthday,{Today_i},M) &"))
        .unwrap_err();
    assert!(err.to_string().contains("variable M has no type declaration"), "{}", err);
    let err = typed_bb(|t| {
        t.replace(
            "dec_p_type(remind(kn,bb,date,kn,kn,bb))",
            "dec_p_type(remind(kn,bb,date,kn,kn))",
        )
    })
    .unwrap_err();
    assert!(err.to_string().contains("remind"), "{}", err);
    let mut e = Engine::new();
    e.config.type_check = true;
    assert!(e.consult_str(":- dec_type(t,t).").is_err());
    assert!(e.consult_str("p(X) :- X = {}.\n:- dec_p_type(p(stype(int))).").is_err());
    assert!(e.consult_str(":- dec_p_type(q).\nq :- true.").is_ok());
}

#[test]
fn type_synonyms_expand() {
    let mut e = Engine::new();
    e.consult_file(BB).unwrap();
    let show = |name: &str| format!("{:?}", e.types.expand(&setlog::types::TypeExpr::named(name)).unwrap());
    assert!(show("bb").contains("name") && show("bb").contains("date"));
    assert!(show("kn").contains("name"));
}

#[test]
fn obligations_match_the_hand_written_goals() {
    let mut e = Engine::new();
    e.consult_file(BB).unwrap();
    let o = InvarianceObligation::new("birthdayBookInv", "addBirthday");
    assert_eq!(
        invariance_goal_text(&e, &o).unwrap(),
        "dom(B,K) & addBirthday(K,B,N,D,K_,B_) & ndom(B_,K_)"
    );
    e.consult_str("birthdayBookFun(Known,Birthday) :- pfun(Birthday).").unwrap();
    let o = InvarianceObligation::new("birthdayBookFun", "addBirthday").hypothesis("dom(B,K)");
    assert_eq!(
        invariance_goal_text(&e, &o).unwrap(),
        "dom(B,K) & pfun(B) & addBirthday(K,B,N,D,K_,B_) & npfun(B_)"
    );
    let g = parse_goal("X in A & A = B.", &mut VarGen::new()).unwrap();
    assert_eq!(negate_goal(&g.goal).unwrap().to_string(), "X nin A or A neq B");
    let g = parse_goal("a =< y.", &mut VarGen::new()).unwrap();
    match negate_goal(&g.goal).unwrap() {
        Goal::Constraint(c) => assert_eq!(c.sym, Sym::Gt),
        other => panic!("{}", other),
    }
}

#[test]
fn program_items_keep_order() {
    let p = parse_program(":- dec_type(kn,stype(name)).\np(X) :- X = {}.", &mut VarGen::new()).unwrap();
    assert!(matches!(p.items[0], Item::Directive { .. }));
    assert!(matches!(p.items[1], Item::Clause { .. }));
}
