use setlog::arith::ArithMode;
use setlog::goal::{Goal, Sym};
use setlog::syntax::{parse_goal, parse_program, parse_query, Directive, Query};
use setlog::term::{ArithOp, Term, VarGen};
fn goal(s: &str) -> Goal {
    parse_goal(s, &mut VarGen::new()).unwrap().goal
}

#[test]
fn simple_equality() {
    match goal("X = {}.") {
        Goal::Constraint(c) => {
            assert_eq!(c.sym, Sym::Eq);
            assert_eq!(c.args[1], Term::Empty);
        }
        g => panic!("{:?}", g),
    }
}

#[test]
fn set_sugar_nests() {
    let g = parse_goal("S = {1, 2 / X}.", &mut VarGen::new()).unwrap();
    let x = g.vars[1].clone();
    match g.goal {
        Goal::Constraint(c) => assert_eq!(
            c.args[1],
            Term::cons(Term::Int(1), Term::cons(Term::Int(2), Term::Var(x)))
        ),
        other => panic!("{:?}", other),
    }
}

#[test]
fn conjunction_binds_tighter_than_or() {
    match goal("a & b or c.") {
        Goal::Disj(l, _) => assert!(matches!(*l, Goal::Conj(..))),
        g => panic!("{:?}", g),
    }
}

#[test]
fn parenthesized_arithmetic_is_not_a_group() {
    match goal("(X + 1) > X.") {
        Goal::Constraint(c) => assert_eq!(c.sym, Sym::Gt),
        g => panic!("{:?}", g),
    }
}

#[test]
fn parenthesized_group() {
    match goal("(X in A or X nin A) & Y = 1.") {
        Goal::Conj(l, _) => assert!(matches!(*l, Goal::Disj(..))),
        g => panic!("{:?}", g),
    }
}

#[test]
fn typed_constants() {
    match goal("X = name?maxi.") {
        Goal::Constraint(c) => assert_eq!(c.args[1], Term::typed("name", "maxi")),
        g => panic!("{:?}", g),
    }
}

#[test]
fn unclosed_set_is_rejected() {
    let err = parse_program("foo(X) :- X in {1,2.", &mut VarGen::new()).unwrap_err();
    assert_eq!(err.line, 1);
    assert_eq!(err.col, 20);
}

#[test]
fn unknown_directive() {
    let err = parse_program(":- frobnicate(x).", &mut VarGen::new()).unwrap_err();
    assert!(err.message.contains("unknown directive"));
}

#[test]
fn query_commands() {
    let mut g = VarGen::new();
    assert!(matches!(parse_query("halt.", &mut g).unwrap(), Query::Halt));
    assert!(matches!(
        parse_query("int_solver(clpfd).", &mut g).unwrap(),
        Query::Command(Directive::IntSolver(ArithMode::FiniteDomain))
    ));
    assert!(matches!(
        parse_query("consult('bb.slog').", &mut g).unwrap(),
        Query::Command(Directive::Consult(f)) if f == "bb.slog"
    ));
}

#[test]
fn negative_literals_and_subtraction() {
    match goal("X is Y - 3 - 1.") {
        Goal::Constraint(c) => match &c.args[1] {
            Term::Arith(ArithOp::Sub, a) => {
                assert!(matches!(&a[0], Term::Arith(ArithOp::Sub, _)));
                assert_eq!(a[1], Term::Int(1));
            }
            t => panic!("{:?}", t),
        },
        g => panic!("{:?}", g),
    }
    match goal("X = -4.") {
        Goal::Constraint(c) => assert_eq!(c.args[1], Term::Int(-4)),
        g => panic!("{:?}", g),
    }
}
