//! List semantics for the sequence operators.

use setlog::engine::Engine;
use setlog::goal::Sym;

use super::{atom, pair, set, solver_holds, V};

pub type List = Vec<V>;

/// All lists of length at most `max_len` over `alphabet`.
pub fn lists(alphabet: &[V], max_len: usize) -> Vec<List> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<List> = frontier
            .iter()
            .flat_map(|l: &List| {
                alphabet.iter().map(move |a| {
                    let mut m = l.clone();
                    m.push(a.clone());
                    m
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `{[1,x1],...,[n,xn]}`.
pub fn encode(l: &[V]) -> V {
    set(l.iter().enumerate().map(|(i, x)| pair(V::Int(i as i64 + 1), x.clone())))
}

/// Sets that are not sequences.
pub fn non_sequences() -> Vec<V> {
    vec![
        set([pair(V::Int(2), atom("a"))]),
        set([pair(V::Int(1), atom("a")), pair(V::Int(1), atom("b"))]),
        set([pair(V::Int(1), atom("a")), pair(V::Int(3), atom("b"))]),
        set([pair(V::Int(0), atom("a"))]),
        set([atom("a")]),
    ]
}

fn choose(xs: &[V]) -> Vec<Vec<V>> {
    (0..1u32 << xs.len())
        .map(|m| (0..xs.len()).filter(|i| m & (1 << i) != 0).map(|i| xs[i].clone()).collect())
        .collect()
}

#[derive(Debug, Default)]
pub struct SeqReport {
    pub cases: usize,
    pub errors: Vec<String>,
    pub mismatches: Vec<String>,
}

impl SeqReport {
    fn check(&mut self, engine: &mut Engine, sym: Sym, args: Vec<V>, want: bool) {
        self.cases += 1;
        let text = || {
            let a: Vec<String> = args.iter().map(|v| super::to_term(v).to_string()).collect();
            format!("{}({})", sym.name(), a.join(","))
        };
        match solver_holds(engine, sym, &args) {
            Ok(got) if got == want => {}
            Ok(got) => self.mismatches.push(format!("{} solver {} lists {}", text(), got, want)),
            Err(e) => self.errors.push(format!("{}: {}", text(), e)),
        }
    }
}

/// Compares every sequence operator with list semantics on all ground lists
/// of length at most `max_len` over `alphabet`.
pub fn check_all(engine: &mut Engine, alphabet: &[V], max_len: usize) -> SeqReport {
    let all = lists(alphabet, max_len);
    let positions: Vec<V> = (1..=max_len as i64).map(V::Int).collect();
    let mut r = SeqReport::default();
    for s in &all {
        let e = encode(s);
        r.check(engine, Sym::Slist, vec![e.clone()], true);
        for x in alphabet {
            r.check(engine, Sym::Head, vec![e.clone(), x.clone()], s.first() == Some(x));
            r.check(engine, Sym::Last, vec![e.clone(), x.clone()], s.last() == Some(x));
            let mut added = s.clone();
            added.push(x.clone());
            for o in &all {
                r.check(engine, Sym::Add, vec![e.clone(), x.clone(), encode(o)], added == *o);
            }
        }
        for o in &all {
            let oe = encode(o);
            let tail = (!s.is_empty()).then(|| s[1..].to_vec());
            let front = (!s.is_empty()).then(|| s[..s.len() - 1].to_vec());
            r.check(engine, Sym::Tail, vec![e.clone(), oe.clone()], tail.as_ref() == Some(o));
            r.check(engine, Sym::Front, vec![e.clone(), oe.clone()], front.as_ref() == Some(o));
            for p in &all {
                let joined: List = s.iter().chain(o.iter()).cloned().collect();
                r.check(engine, Sym::Concat, vec![e.clone(), oe.clone(), encode(p)], joined == *p);
            }
            for keep in choose(&positions) {
                let kept: List = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| keep.contains(&V::Int(*i as i64 + 1)))
                    .map(|(_, x)| x.clone())
                    .collect();
                r.check(engine, Sym::Filter, vec![set(keep.iter().cloned()), e.clone(), oe.clone()], kept == *o);
            }
            for keep in choose(alphabet) {
                let kept: List = s.iter().filter(|x| keep.contains(x)).cloned().collect();
                r.check(engine, Sym::Extract, vec![e.clone(), set(keep.iter().cloned()), oe.clone()], kept == *o);
            }
        }
    }
    for bad in non_sequences() {
        r.check(engine, Sym::Slist, vec![bad.clone()], false);
        for x in alphabet {
            r.check(engine, Sym::Head, vec![bad.clone(), x.clone()], false);
            r.check(engine, Sym::Last, vec![bad.clone(), x.clone()], false);
        }
    }
    r
}
