mod common;

use common::{assignments, v};
use proptest::prelude::*;
use splitreduc::io::{export_qubo, from_json, parse, parse_into, serialize, to_json, SymbolTable};
use splitreduc::{Assignment, Monomial, Polynomial, VarId};

const VARS: u32 = 6;

fn raw_terms(max_terms: usize, max_degree: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec(
        (-9i64..=9, prop::collection::vec(0..VARS, 0..=max_degree)),
        0..=max_terms,
    )
}

fn build(raw: &[(i64, Vec<u32>)]) -> Polynomial {
    Polynomial::canonicalize(raw.iter().map(|(c, vs)| (*c, vs.iter().map(|&i| v(i))))).unwrap()
}

fn poly(max_terms: usize, max_degree: usize) -> impl Strategy<Value = Polynomial> {
    raw_terms(max_terms, max_degree).prop_map(|raw| build(&raw))
}

fn all_vars() -> Vec<VarId> {
    (0..VARS).map(v).collect()
}

fn point() -> impl Strategy<Value = Assignment> {
    prop::collection::vec(any::<bool>(), VARS as usize).prop_map(|bits| {
        bits.into_iter()
            .enumerate()
            .map(|(k, b)| (v(k as u32), b))
            .collect()
    })
}

proptest! {
    #[test]
    fn substitution_agrees_with_evaluation(p in poly(12, 5), x in point(), k in 0..VARS) {
        let bit = x.get(v(k)).unwrap();
        let fixed = p.substitute(v(k), bit).unwrap();
        prop_assert!(!fixed.support().contains(&v(k)));
        prop_assert_eq!(fixed.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
    }

    #[test]
    fn shannon_expansion(p in poly(12, 5), k in 0..VARS) {
        let x = Polynomial::var(v(k));
        let p0 = p.substitute(v(k), false).unwrap();
        let p1 = p.substitute(v(k), true).unwrap();
        let rebuilt = p0.add(&x.multiply(&p1.sub(&p0).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn canonical_form_is_unique(raw in raw_terms(12, 5), seed in any::<u64>()) {
        let p = build(&raw);
        // Reverse the term list, reverse and repeat variables inside each
        // monomial and split every coefficient in two.
        let mut shuffled: Vec<(i64, Vec<u32>)> = Vec::new();
        for (c, vs) in raw.iter().rev() {
            let mut doubled: Vec<u32> = vs.iter().rev().copied().collect();
            doubled.extend(vs.iter().take((seed % 3) as usize));
            let half = c / 2;
            shuffled.push((half, doubled.clone()));
            shuffled.push((c - half, doubled));
        }
        prop_assert_eq!(build(&shuffled), p.clone());
        for w in p.terms().windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        prop_assert!(p.terms().iter().all(|(_, c)| *c != 0));
    }

    #[test]
    fn arithmetic_is_pointwise(p in poly(8, 4), q in poly(8, 4), s in -5i64..=5) {
        let sum = p.add(&q).unwrap();
        let diff = p.sub(&q).unwrap();
        let prod = p.multiply(&q).unwrap();
        let scaled = p.scale(s).unwrap();
        for x in assignments(&all_vars()) {
            let (a, b) = (p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
            prop_assert_eq!(sum.evaluate(&x).unwrap(), a + b);
            prop_assert_eq!(diff.evaluate(&x).unwrap(), a - b);
            prop_assert_eq!(prod.evaluate(&x).unwrap(), a * b);
            prop_assert_eq!(scaled.evaluate(&x).unwrap(), s * a);
        }
    }

    #[test]
    fn text_round_trip_keeps_ids_in_same_table(p in poly(12, 5)) {
        let table = SymbolTable::indexed(VARS as usize);
        let text = serialize(&p, &table);
        prop_assert_eq!(parse_into(&text, &mut table.clone()).unwrap(), p);
    }

    #[test]
    fn text_round_trip_by_name(p in poly(12, 5)) {
        // A fresh parse numbers variables by first appearance, so compare
        // through the names.
        let table = SymbolTable::with_names(["alpha", "b_2", "c3", "d", "e", "f"]);
        let (q, fresh) = parse(&serialize(&p, &table)).unwrap();
        let renamed = q.map_vars(|x| table.lookup(&fresh.name(x)).unwrap()).unwrap();
        prop_assert_eq!(renamed, p);
    }

    #[test]
    fn json_round_trip(p in poly(12, 5)) {
        let table = SymbolTable::indexed(VARS as usize);
        let (q, back) = from_json(&to_json(&p, &table)).unwrap();
        prop_assert_eq!(q, p.clone());
        for x in p.support() {
            prop_assert_eq!(back.name(*x), table.name(*x));
        }
    }

    #[test]
    fn qubo_export_preserves_energy(p in poly(12, 2)) {
        let table = SymbolTable::indexed(VARS as usize);
        let q = export_qubo(&p, &table).unwrap();
        prop_assert!(q.quadratic.iter().all(|(i, j, _)| i < j));
        for x in assignments(&all_vars()) {
            prop_assert_eq!(q.energy(|y| x.get(y).unwrap()), p.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn restrict_is_iterated_substitution(p in poly(12, 5), x in point(), mask in 0u32..64) {
        let prefix: Assignment = x.iter().filter(|(y, _)| mask >> y.0 & 1 == 1).collect();
        let r = p.restrict(&prefix).unwrap();
        prop_assert!(prefix.iter().all(|(y, _)| !r.support().contains(&y)));
        prop_assert_eq!(r.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
    }
}

#[test]
fn overflow_is_reported() {
    let big = Polynomial::constant(i64::MAX);
    assert!(big.add(&Polynomial::constant(1)).is_err());
    assert!(big.scale(2).is_err());
    assert!(Polynomial::monomial(Monomial::new([v(0)]), i64::MIN)
        .multiply(&Polynomial::constant(-1))
        .is_err());
}

#[test]
fn unbound_variable_is_reported() {
    let (p, _) = parse("a*b + 2").unwrap();
    let partial: Assignment = [(v(0), true)].into_iter().collect();
    assert!(matches!(
        p.evaluate(&partial),
        Err(splitreduc::Error::UnboundVariable(VarId(1)))
    ));
}
