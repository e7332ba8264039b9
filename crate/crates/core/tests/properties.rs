//! Randomised laws over small groupoids, checked against direct evaluation.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use uag_core::congruence::{in_closure, CongruenceTable};
use uag_core::geometry::{ac_closure, minimal_subsystem, systems_equivalent};
use uag_core::{
    AffineSpace, AlgebraicSet, Elem, Equation, EquationSystem, FiniteAlgebra, Limits, Signature, SymbolId, Term,
    VariableSet,
};

fn sig() -> &'static Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| Arc::new(Signature::from_symbols([("*", 2)]).unwrap()))
}

fn mul() -> SymbolId {
    sig().lookup("*").unwrap()
}

fn term(vars: usize) -> impl Strategy<Value = Term> {
    let leaf = (0..vars).prop_map(Term::var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app(mul(), vec![a, b]))
    })
}

fn equations(vars: usize, max: usize) -> impl Strategy<Value = Vec<(Term, Term)>> {
    prop::collection::vec((term(vars), term(vars)), 1..=max)
}

fn groupoid() -> impl Strategy<Value = Arc<FiniteAlgebra>> {
    (1usize..=3)
        .prop_flat_map(|k| prop::collection::vec(0..k as Elem, k * k).prop_map(move |t| (k, t)))
        .prop_map(|(k, t)| Arc::new(FiniteAlgebra::new(sig().clone(), k, vec![t]).unwrap()))
}

fn system(vars: usize, eqs: &[(Term, Term)]) -> EquationSystem {
    let eqs = eqs.iter().map(|(l, r)| Equation::new(l.clone(), r.clone())).collect();
    EquationSystem::new(sig().clone(), VariableSet::standard(vars).unwrap(), eqs).unwrap()
}

fn space(a: &Arc<FiniteAlgebra>, n: usize) -> Arc<AffineSpace> {
    AffineSpace::standard(a.clone(), n, Limits::default()).unwrap()
}

/// Points of `A^n` satisfying every equation, by enumeration.
fn naive_solutions(a: &FiniteAlgebra, n: usize, eqs: &[(Term, Term)]) -> Vec<Vec<Elem>> {
    let k = a.size() as Elem;
    let mut out = Vec::new();
    let mut p = vec![0 as Elem; n];
    loop {
        if eqs.iter().all(|(l, r)| a.eval(l, &p) == a.eval(r, &p)) {
            out.push(p.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            p[i] += 1;
            if p[i] < k {
                break;
            }
            p[i] = 0;
        }
    }
}

fn rebuild(t: &Term) -> Term {
    match t.as_var() {
        Some(i) => Term::var(i),
        None => Term::app(mul(), t.args().iter().map(rebuild).collect::<Vec<_>>()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hash_consing_shares_structure(t in term(3)) {
        let again = rebuild(&t);
        prop_assert_eq!(again.id(), t.id());
        prop_assert_eq!(&again, &t);
    }

    #[test]
    fn substitution_laws(t in term(3), m1 in prop::collection::vec(term(2), 3), m2 in prop::collection::vec(term(2), 2)) {
        let id: Vec<Term> = (0..3).map(Term::var).collect();
        prop_assert_eq!(t.substitute(&id), t.clone());
        let composed: Vec<Term> = m1.iter().map(|s| s.substitute(&m2)).collect();
        prop_assert_eq!(t.substitute(&m1).substitute(&m2), t.substitute(&composed));
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in groupoid(), t in term(3), m in prop::collection::vec(term(2), 3), p in prop::collection::vec(0u32..3, 2)) {
        let p: Vec<Elem> = p.iter().map(|&x| x % a.size() as Elem).collect();
        let inner: Vec<Elem> = m.iter().map(|s| a.eval(s, &p)).collect();
        prop_assert_eq!(a.eval(&t.substitute(&m), &p), a.eval(&t, &inner));
    }

    #[test]
    fn congruence_closure_is_a_congruence(eqs in equations(3, 3), u in term(3), x in term(3), y in term(3)) {
        let s = system(3, &eqs);
        for (l, r) in &eqs {
            prop_assert!(in_closure(l, r, &s));
            prop_assert!(in_closure(r, l, &s));
        }
        prop_assert!(in_closure(&x, &x, &s));
        if in_closure(&x, &y, &s) {
            prop_assert!(in_closure(&y, &x, &s));
            let (xu, yu) = (Term::app(mul(), vec![x.clone(), u.clone()]), Term::app(mul(), vec![y.clone(), u.clone()]));
            prop_assert!(in_closure(&xu, &yu, &s));
            let (ux, uy) = (Term::app(mul(), vec![u.clone(), x.clone()]), Term::app(mul(), vec![u, y.clone()]));
            prop_assert!(in_closure(&ux, &uy, &s));
        }
        let mut table = CongruenceTable::close(&s, &[x.clone(), y.clone()]);
        prop_assert_eq!(table.equivalent(&x, &y), in_closure(&x, &y, &s));
    }

    #[test]
    fn congruence_closure_is_sound_in_models(a in groupoid(), eqs in equations(2, 3), x in term(2), y in term(2)) {
        let s = system(2, &eqs);
        if in_closure(&x, &y, &s) {
            for p in naive_solutions(&a, 2, &eqs) {
                prop_assert_eq!(a.eval(&x, &p), a.eval(&y, &p));
            }
        }
    }

    #[test]
    fn solving_matches_enumeration(a in groupoid(), eqs in equations(2, 3)) {
        let y = space(&a, 2).solve(&system(2, &eqs)).unwrap();
        prop_assert_eq!(y.points_decoded(), naive_solutions(&a, 2, &eqs));
    }

    #[test]
    fn galois_maps_reverse_order(a in groupoid(), s1 in equations(2, 2), s2 in equations(2, 2)) {
        let sp = space(&a, 2);
        let mut both = s1.clone();
        both.extend(s2.iter().cloned());
        let y1 = sp.solve(&system(2, &s1)).unwrap();
        let y12 = sp.solve(&system(2, &both)).unwrap();
        prop_assert!(y12.is_subset(&y1));
        // every equation of S lies in Rad(V(S)), and Rad is antitone
        for (l, r) in &s1 {
            prop_assert!(y1.in_radical(l, r));
            prop_assert!(y12.in_radical(l, r));
        }
    }

    #[test]
    fn zariski_closure_is_a_closure_operator(a in groupoid(), m1 in 0u64..512, m2 in 0u64..512) {
        let sp = space(&a, 2);
        let n = sp.point_count();
        let set = |m: u64| AlgebraicSet::from_codes(sp.clone(), (0..n).filter(|c| m >> c & 1 == 1).collect());
        let (y, z) = (set(m1 & m2), set(m1));
        let (cy, cz) = (ac_closure(&y).unwrap(), ac_closure(&z).unwrap());
        prop_assert!(y.is_subset(&cy));
        prop_assert!(cy.is_subset(&cz));
        let again = ac_closure(&cz).unwrap();
        prop_assert_eq!(again.codes(), cz.codes());
    }

    #[test]
    fn solution_sets_lift_to_direct_powers(a in groupoid(), eqs in equations(2, 3)) {
        let limits = Limits::default();
        let base = space(&a, 2).solve(&system(2, &eqs)).unwrap().len();
        let power = Arc::new(a.direct_power(2, &limits).unwrap());
        let lifted = AffineSpace::standard(power, 2, limits).unwrap().solve(&system(2, &eqs)).unwrap();
        prop_assert_eq!(lifted.len(), base * base);
    }

    #[test]
    fn every_system_has_an_irredundant_equivalent_subsystem(a in groupoid(), eqs in equations(2, 6)) {
        let sp = space(&a, 2);
        let s = system(2, &eqs);
        let min = minimal_subsystem(&sp, &s).unwrap();
        prop_assert!(min.equations().iter().all(|e| s.equations().contains(e)));
        prop_assert!(systems_equivalent(&sp, &s, &min).unwrap());
        let v = sp.solve(&s).unwrap();
        for i in 0..min.len() {
            let mut rest = min.equations().to_vec();
            rest.remove(i);
            prop_assert_ne!(sp.solve(&min.with_equations(rest).unwrap()).unwrap(), v.clone());
        }
    }

    #[test]
    fn descending_chains_stabilise(a in groupoid(), eqs in equations(2, 8)) {
        let sp = space(&a, 2);
        let mut sizes = Vec::new();
        for i in 1..=eqs.len() {
            sizes.push(sp.solve(&system(2, &eqs[..i])).unwrap().len());
        }
        prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
        // strict drops are bounded by the number of points
        let drops = sizes.windows(2).filter(|w| w[0] > w[1]).count();
        prop_assert!(drops < sp.point_count() as usize);
    }

    #[test]
    fn monomorphisms_and_epimorphisms_compose(a in groupoid(), b in groupoid(), c in groupoid()) {
        let limits = Limits::default();
        let ab = a.homomorphisms_to(&b, &limits).unwrap();
        let bc = b.homomorphisms_to(&c, &limits).unwrap();
        for f in &ab {
            for g in &bc {
                let gf = f.then(g);
                for x in 0..a.size() as Elem {
                    for y in 0..a.size() as Elem {
                        let xy = a.apply(mul(), &[x, y]);
                        prop_assert_eq!(gf.apply(xy), c.apply(mul(), &[gf.apply(x), gf.apply(y)]));
                    }
                }
                if f.is_injective(b.size()) && g.is_injective(c.size()) {
                    prop_assert!(gf.is_injective(c.size()));
                }
                if f.is_surjective(b.size()) && g.is_surjective(c.size()) {
                    prop_assert!(gf.is_surjective(c.size()));
                }
                if gf.is_injective(c.size()) {
                    prop_assert!(f.is_injective(b.size()));
                }
                if gf.is_surjective(c.size()) {
                    prop_assert!(g.is_surjective(c.size()));
                }
            }
        }
    }
}
