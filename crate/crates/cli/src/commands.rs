use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use uag_core::dsl::Document;
use uag_core::finalg::QuasiIdentity;
use uag_core::geometry::{
    decompose, decompose_with_seed_order, dual_homomorphisms, enumerate_term_maps, is_irreducible,
    minimal_subsystem, sets_isomorphic, systems_equivalent, TermMap,
};
use uag_core::sigterm::parse_equation;
use uag_core::unification::{self, Evidence, Verdict};
use uag_core::{
    AffineSpace, AlgebraicSet, Elem, Equation, EquationSystem, Error, FiniteAlgebra, Homomorphism,
    Limits,
};

use crate::config::RunConfig;
use crate::report::{point, points, CliError, Report, Text};
use crate::{CandidateArgs, CheckCommand, Command, PairArgs, SetArgs};

type Out = Result<Report, CliError>;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Out {
    let limits = cfg.limits();
    match cmd {
        Command::Solve(a) => solve(a, &limits),
        Command::Gamma(a) => gamma(a, &limits),
        Command::Decompose { set, shuffles } => decomposition(set, *shuffles, cfg.seed, &limits),
        Command::Reduce(a) => reduce(a, &limits),
        Command::RadicalMember { set, equation } => radical_member(set, equation, &limits),
        Command::ClosureMember {
            files,
            system,
            equation,
        } => closure_member(files, system, equation),
        Command::Check(c) => check(c, &limits),
        Command::Duality(a) => duality(a, &limits),
        Command::Isomorphic(a) => isomorphic(a, &limits),
    }
}

fn load(files: &[PathBuf]) -> Result<Document, CliError> {
    let mut doc = Document::default();
    for f in files {
        let text = std::fs::read_to_string(f).map_err(|e| CliError::Io(format!("{}: {e}", f.display())))?;
        doc.extend(&text)
            .map_err(|e| CliError::InFile(f.display().to_string(), e))?;
    }
    Ok(doc)
}

/// A named system solved over a named algebra.
struct Solved {
    signature: String,
    system: EquationSystem,
    space: Arc<AffineSpace>,
    set: Arc<AlgebraicSet>,
}

fn solve_named(doc: &Document, algebra: &str, system: &str, limits: &Limits) -> Result<Solved, CliError> {
    let a = doc.algebra(algebra)?;
    let s = doc.system(system)?;
    if **a.algebra.signature() != **s.system.signature() {
        return Err(Error::Precondition(format!(
            "system `{system}` is over `{}` but algebra `{algebra}` is over `{}`",
            s.signature, a.signature
        ))
        .into());
    }
    let space = AffineSpace::new(a.algebra.clone(), s.system.vars().clone(), *limits)?;
    let set = Arc::new(space.solve(&s.system)?);
    Ok(Solved {
        signature: s.signature.clone(),
        system: s.system.clone(),
        space,
        set,
    })
}

fn equation_strings(s: &EquationSystem) -> Vec<String> {
    s.equations().iter().map(|e| s.display_equation(e)).collect()
}

#[derive(Serialize)]
struct SolveOut<'a> {
    command: &'static str,
    algebra: &'a str,
    system: &'a str,
    vars: &'a [String],
    equations: Vec<String>,
    consistent: bool,
    count: usize,
    points: Vec<Vec<Elem>>,
}

fn solve(a: &SetArgs, limits: &Limits) -> Out {
    let doc = load(&a.files)?;
    let s = solve_named(&doc, &a.algebra, &a.system, limits)?;
    let pts = s.set.points_decoded();
    let out = SolveOut {
        command: "solve",
        algebra: &a.algebra,
        system: &a.system,
        vars: s.system.vars().names(),
        equations: equation_strings(&s.system),
        consistent: !pts.is_empty(),
        count: pts.len(),
        points: pts,
    };
    let text = Text::default()
        .line("system", format!("{} over {}", a.system, a.algebra))
        .line("vars", s.system.vars())
        .line("solutions", out.count)
        .line("points", points(&out.points))
        .finish();
    Report::new(&out, text)
}

#[derive(Serialize)]
struct GammaBody {
    size: usize,
    witnesses: Vec<String>,
    /// Values of each term function at the points, in point order.
    values: Vec<Vec<Elem>>,
}

#[derive(Serialize)]
struct GammaOut<'a> {
    command: &'static str,
    algebra: &'a str,
    system: &'a str,
    points: Vec<Vec<Elem>>,
    gamma: GammaBody,
}

fn gamma(a: &SetArgs, limits: &Limits) -> Out {
    let doc = load(&a.files)?;
    let s = solve_named(&doc, &a.algebra, &a.system, limits)?;
    let g = s.set.coordinate_algebra()?;
    let witnesses = g.witness_strings();
    let out = GammaOut {
        command: "gamma",
        algebra: &a.algebra,
        system: &a.system,
        points: s.set.points_decoded(),
        gamma: GammaBody {
            size: g.len(),
            values: (0..g.len() as Elem).map(|e| g.values(e).to_vec()).collect(),
            witnesses,
        },
    };
    let mut t = Text::default();
    t.line("points", points(&out.points)).line("size", g.len());
    for (i, (w, v)) in out.gamma.witnesses.iter().zip(&out.gamma.values).enumerate() {
        t.raw(&format!("  {i}: {w} = {}", point(v)));
    }
    Report::new(&out, t.finish())
}

#[derive(Serialize)]
struct Component {
    points: Vec<Vec<Elem>>,
    generic_point: Option<Vec<Elem>>,
}

#[derive(Serialize)]
struct DecomposeOut<'a> {
    command: &'static str,
    algebra: &'a str,
    system: &'a str,
    points: Vec<Vec<Elem>>,
    irreducible: bool,
    generic_point: Option<Vec<Elem>>,
    components: Vec<Component>,
    /// The components cover the set.
    union: bool,
    /// No component contains another.
    incomparable: bool,
    shuffles: usize,
    /// Every shuffled recomputation produced the same components.
    stable: bool,
}

fn decomposition(a: &SetArgs, shuffles: usize, seed: u64, limits: &Limits) -> Out {
    let doc = load(&a.files)?;
    let s = solve_named(&doc, &a.algebra, &a.system, limits)?;
    let y = &*s.set;
    let irr = is_irreducible(y)?;
    let comps = decompose(y)?;
    let mut union = s.space.empty_set();
    for c in &comps {
        union = union.union(c);
    }
    let incomparable = comps
        .iter()
        .enumerate()
        .all(|(i, c)| comps.iter().enumerate().all(|(j, d)| i == j || !c.is_subset(d)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stable = true;
    for _ in 0..shuffles {
        let mut order: Vec<usize> = (0..y.len()).collect();
        order.shuffle(&mut rng);
        let again = decompose_with_seed_order(y, &order)?;
        stable &= again == comps;
    }
    let mut components = Vec::with_capacity(comps.len());
    for c in &comps {
        components.push(Component {
            points: c.points_decoded(),
            generic_point: is_irreducible(c)?.generic_point,
        });
    }
    let out = DecomposeOut {
        command: "decompose",
        algebra: &a.algebra,
        system: &a.system,
        points: y.points_decoded(),
        irreducible: irr.irreducible,
        generic_point: irr.generic_point,
        components,
        union: union == *y,
        incomparable,
        shuffles,
        stable,
    };
    let mut t = Text::default();
    t.line("points", points(&out.points))
        .line("irreducible", out.irreducible)
        .line("components", out.components.len());
    for (i, c) in out.components.iter().enumerate() {
        let g = c.generic_point.as_deref().map(point).unwrap_or_default();
        t.raw(&format!("  {i}: {} generic {g}", points(&c.points)));
    }
    t.line("union", out.union).line("incomparable", out.incomparable);
    if shuffles > 0 {
        t.line("stable", format!("{} over {shuffles} shuffles", out.stable));
    }
    Report::new(&out, t.finish())
}

#[derive(Serialize)]
struct ReduceOut<'a> {
    command: &'static str,
    algebra: &'a str,
    system: &'a str,
    input: Vec<String>,
    output: Vec<String>,
    /// Positions of the dropped equations in the input.
    removed: Vec<usize>,
    equivalent: bool,
    irredundant: bool,
    dsl: String,
}

fn reduce(a: &SetArgs, limits: &Limits) -> Out {
    let doc = load(&a.files)?;
    let s = solve_named(&doc, &a.algebra, &a.system, limits)?;
    let min = minimal_subsystem(&s.space, &s.system)?;
    let kept: HashSet<&Equation> = min.equations().iter().collect();
    let removed = s
        .system
        .equations()
        .iter()
        .enumerate()
        .filter(|(_, e)| !kept.contains(e))
        .map(|(i, _)| i)
        .collect();
    let equivalent = systems_equivalent(&s.space, &s.system, &min)?;
    let mut irredundant = true;
    for i in 0..min.len() {
        let mut rest = min.equations().to_vec();
        rest.remove(i);
        if s.space.solve(&min.with_equations(rest)?)? == *s.set {
            irredundant = false;
        }
    }
    let out = ReduceOut {
        command: "reduce",
        algebra: &a.algebra,
        system: &a.system,
        input: equation_strings(&s.system),
        output: equation_strings(&min),
        removed,
        equivalent,
        irredundant,
        dsl: min.to_dsl_block(&format!("{}_min", a.system), &s.signature),
    };
    let text = Text::default()
        .line("input", out.input.len())
        .line("kept", out.output.len())
        .line("equivalent", out.equivalent)
        .line("irredundant", out.irredundant)
        .raw(&out.dsl)
        .finish();
    Report::new(&out, text)
}

#[derive(Serialize)]
struct RadicalOut<'a> {
    command: &'static str,
    algebra: &'a str,
    system: &'a str,
    equation: String,
    member: bool,
    /// A solution at which the two sides differ.
    counterexample: Option<Vec<Elem>>,
}

fn radical_member(a: &SetArgs, equation: &str, limits: &Limits) -> Out {
    let doc = load(&a.files)?;
    let s = solve_named(&doc, &a.algebra, &a.system, limits)?;
    let eq = parse_equation(equation, s.system.signature(), s.system.vars())?;
    let member = s.set.in_radical(&eq.lhs, &eq.rhs);
    let algebra = s.space.algebra();
    let counterexample = s.set.points_decoded().into_iter().find(|p| !algebra.holds(&eq, p));
    let out = RadicalOut {
        command: "radical-member",
        algebra: &a.algebra,
        system: &a.system,
        equation: s.system.display_equation(&eq),
        member,
        counterexample,
    };
    let mut t = Text::default();
    t.line("equation", &out.equation).line("member", out.member);
    if let Some(p) = &out.counterexample {
        t.line("counterexample", point(p));
    }
    Report::new(&out, t.finish())
}

#[derive(Serialize)]
struct ClosureOut<'a> {
    command: &'static str,
    system: &'a str,
    equation: String,
    member: bool,
}

fn closure_member(files: &[PathBuf], system: &str, equation: &str) -> Out {
    let doc = load(files)?;
    let s = &doc.system(system)?.system;
    let eq = parse_equation(equation, s.signature(), s.vars())?;
    let member = uag_core::congruence::in_closure(&eq.lhs, &eq.rhs, s);
    let out = ClosureOut {
        command: "closure-member",
        system,
        equation: s.display_equation(&eq),
        member,
    };
    let text = Text::default()
        .line("equation", &out.equation)
        .line("member", out.member)
        .finish();
    Report::new(&out, text)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum EvidenceOut {
    PowerEmbedding {
        exponent: usize,
        family: Vec<Vec<Elem>>,
        embedding: Vec<Elem>,
    },
    Embedding {
        map: Vec<Elem>,
    },
    Realization {
        generators: Vec<Elem>,
        vars: Vec<String>,
        witnesses: Vec<String>,
        relations: Vec<String>,
        points: Vec<Vec<Elem>>,
        isomorphism: Vec<Elem>,
        generic_point: Option<Vec<Elem>>,
    },
    QuasiIdentity {
        formula: String,
        vars: Vec<String>,
        premises: Vec<String>,
        conclusion: String,
        pair: (Elem, Elem),
        generators: Vec<Elem>,
    },
    InconsistentSystem {
        vars: Vec<String>,
        equations: Vec<String>,
    },
    DisequationClauses {
        formula: String,
        vars: Vec<String>,
        equations: Vec<String>,
    },
    TrivialElement {
        element: Elem,
    },
}

fn disequation_formula(s: &EquationSystem) -> String {
    let clauses: Vec<String> = s
        .equations()
        .iter()
        .map(|e| format!("{} != {}", s.display_term(&e.lhs), s.display_term(&e.rhs)))
        .collect();
    format!("forall {}: {}", s.vars(), clauses.join(" | "))
}

fn evidence_out(e: &Evidence) -> EvidenceOut {
    match e {
        Evidence::PowerEmbedding(p) => EvidenceOut::PowerEmbedding {
            exponent: p.exponent,
            family: p.family.iter().map(|h| h.map().to_vec()).collect(),
            embedding: p.embedding.map().to_vec(),
        },
        Evidence::Embedding(h) => EvidenceOut::Embedding { map: h.map().to_vec() },
        Evidence::Realization(r) => {
            let rel = &r.presentation.relations;
            EvidenceOut::Realization {
                generators: r.presentation.generator_point(),
                vars: r.presentation.vars.names().to_vec(),
                witnesses: r.presentation.witnesses.iter().map(|w| rel.display_term(w)).collect(),
                relations: equation_strings(rel),
                points: r.set.points_decoded(),
                isomorphism: r.isomorphism.map().to_vec(),
                generic_point: r.generic_point.clone(),
            }
        }
        Evidence::QuasiIdentity(w) => {
            let f: &QuasiIdentity = &w.formula;
            EvidenceOut::QuasiIdentity {
                formula: f.to_string(),
                vars: f.premises.vars().names().to_vec(),
                premises: equation_strings(&f.premises),
                conclusion: f.premises.display_equation(&f.conclusion),
                pair: w.pair,
                generators: w.generators.clone(),
            }
        }
        Evidence::InconsistentSystem(s) => EvidenceOut::InconsistentSystem {
            vars: s.vars().names().to_vec(),
            equations: equation_strings(s),
        },
        Evidence::DisequationClauses(s) => EvidenceOut::DisequationClauses {
            formula: disequation_formula(s),
            vars: s.vars().names().to_vec(),
            equations: equation_strings(s),
        },
        Evidence::TrivialElement(e) => EvidenceOut::TrivialElement { element: *e },
    }
}

fn evidence_text(e: &EvidenceOut) -> String {
    match e {
        EvidenceOut::PowerEmbedding { exponent, embedding, .. } => {
            format!("embedding into A^{exponent}: {}", point(embedding))
        }
        EvidenceOut::Embedding { map } => format!("embedding into A: {}", point(map)),
        EvidenceOut::Realization {
            relations,
            points: pts,
            generic_point,
            ..
        } => {
            let mut s = format!("realized by {{{}}} with solutions {}", relations.join("; "), points(pts));
            if let Some(g) = generic_point {
                s.push_str(&format!(", generic point {}", point(g)));
            }
            s
        }
        EvidenceOut::QuasiIdentity { formula, .. } => format!("quasi-identity {formula}"),
        EvidenceOut::InconsistentSystem { equations, .. } => {
            format!("inconsistent system {{{}}}", equations.join("; "))
        }
        EvidenceOut::DisequationClauses { formula, .. } => format!("universal formula {formula}"),
        EvidenceOut::TrivialElement { element } => format!("trivial subalgebra {{{element}}}"),
    }
}

#[derive(Serialize)]
struct CheckOut<'a> {
    command: &'static str,
    claim: &'static str,
    algebra: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidate: Option<&'a str>,
    answer: bool,
    evidence: Vec<EvidenceOut>,
    notes: &'a [String],
}

fn check(c: &CheckCommand, limits: &Limits) -> Out {
    type Criterion = fn(&FiniteAlgebra, Option<&[Elem]>, &Arc<FiniteAlgebra>, &Limits) -> uag_core::Result<Verdict>;
    let candidate = |args: &CandidateArgs, f: Criterion| -> Out {
        let doc = load(&args.files)?;
        let a = &doc.algebra(&args.algebra)?.algebra;
        let cand = &doc.algebra(&args.candidate)?.algebra;
        let verdict = f(cand, args.generators.as_deref(), a, limits)?;
        verdict_report(&verdict, &args.algebra, Some(&args.candidate))
    };
    match c {
        CheckCommand::Coord(args) => candidate(args, unification::coordinate_algebra_criterion),
        CheckCommand::IrrCoord(args) => candidate(args, unification::irreducible_criterion),
        CheckCommand::Qvar(args) => candidate(args, unification::qvar_membership),
        CheckCommand::EmptySet(args) | CheckCommand::TrivialUcl(args) => {
            let doc = load(&args.files)?;
            let a = &doc.algebra(&args.algebra)?.algebra;
            let verdict = if matches!(c, CheckCommand::EmptySet(_)) {
                unification::empty_set_algebraic(a, limits.witness_depth, limits)?
            } else {
                unification::trivial_in_ucl(a, limits.witness_depth, limits)?
            };
            verdict_report(&verdict, &args.algebra, None)
        }
    }
}

fn verdict_report(v: &Verdict, algebra: &str, candidate: Option<&str>) -> Out {
    let out = CheckOut {
        command: "check",
        claim: v.claim.as_str(),
        algebra,
        candidate,
        answer: v.answer,
        evidence: v.evidence.iter().map(evidence_out).collect(),
        notes: &v.notes,
    };
    let mut t = Text::default();
    t.line("claim", out.claim).line("answer", if out.answer { "yes" } else { "no" });
    for e in &out.evidence {
        t.line("evidence", evidence_text(e));
    }
    for n in out.notes {
        t.line("note", n);
    }
    Report::new(&out, t.finish())
}

fn solve_pair(a: &PairArgs, limits: &Limits) -> Result<(Solved, Solved), CliError> {
    let doc = load(&a.files)?;
    let y = solve_named(&doc, &a.algebra, &a.source, limits)?;
    let z = solve_named(&doc, &a.algebra, &a.target, limits)?;
    Ok((y, z))
}

fn map_terms(m: &TermMap, system: &EquationSystem) -> Result<Vec<String>, CliError> {
    Ok(m.terms()?.iter().map(|t| system.display_term(t)).collect())
}

#[derive(Serialize)]
struct DualityRow {
    term_map: Vec<String>,
    homomorphism: Vec<Elem>,
}

#[derive(Serialize)]
struct DualityOut<'a> {
    command: &'static str,
    algebra: &'a str,
    source: &'a str,
    target: &'a str,
    source_points: usize,
    target_points: usize,
    source_gamma: usize,
    target_gamma: usize,
    morphisms: usize,
    homomorphisms: usize,
    bijection: bool,
    identity_law: bool,
    /// Composites `φ` then `ψ` with `ψ` an endomorphism of the target.
    composition_checked: usize,
    composition_law: bool,
    table: Vec<DualityRow>,
}

/// Cap on composable pairs tested by `duality`.
const COMPOSITION_BUDGET: usize = 4096;

fn duality(a: &PairArgs, limits: &Limits) -> Out {
    let (ys, zs) = solve_pair(a, limits)?;
    let (y, z) = (&ys.set, &zs.set);
    let maps = enumerate_term_maps(y, z)?;
    let homs = dual_homomorphisms(y, z)?;
    let duals = maps.iter().map(|m| m.dual()).collect::<Result<Vec<Homomorphism>, _>>()?;
    let hom_set: HashSet<&Homomorphism> = homs.iter().collect();
    let dual_set: HashSet<&Homomorphism> = duals.iter().collect();
    let bijection = dual_set.len() == duals.len() && dual_set == hom_set;

    let gy = y.coordinate_algebra()?;
    let gz = z.coordinate_algebra()?;
    let identity_law = TermMap::identity(y.clone())?.dual()? == Homomorphism::identity(gy.len())
        && TermMap::identity(z.clone())?.dual()? == Homomorphism::identity(gz.len());

    let ends = enumerate_term_maps(z, z)?;
    let mut composition_checked = 0;
    let mut composition_law = true;
    'outer: for (phi, f_phi) in maps.iter().zip(&duals) {
        for psi in &ends {
            if composition_checked == COMPOSITION_BUDGET {
                break 'outer;
            }
            let lhs = phi.then(psi)?.dual()?;
            composition_law &= lhs == psi.dual()?.then(f_phi);
            composition_checked += 1;
        }
    }

    let mut table = Vec::with_capacity(maps.len());
    for (m, h) in maps.iter().zip(&duals) {
        table.push(DualityRow {
            term_map: map_terms(m, &ys.system)?,
            homomorphism: h.map().to_vec(),
        });
    }
    let out = DualityOut {
        command: "duality",
        algebra: &a.algebra,
        source: &a.source,
        target: &a.target,
        source_points: y.len(),
        target_points: z.len(),
        source_gamma: gy.len(),
        target_gamma: gz.len(),
        morphisms: maps.len(),
        homomorphisms: homs.len(),
        bijection,
        identity_law,
        composition_checked,
        composition_law,
        table,
    };
    let mut t = Text::default();
    t.line("morphisms", out.morphisms)
        .line("homomorphisms", out.homomorphisms)
        .line("bijection", out.bijection)
        .line("identity law", out.identity_law)
        .line(
            "composition law",
            format!("{} ({} pairs)", out.composition_law, out.composition_checked),
        );
    for row in &out.table {
        t.raw(&format!("  ({}) -> {}", row.term_map.join(", "), point(&row.homomorphism)));
    }
    Report::new(&out, t.finish())
}

#[derive(Serialize)]
struct IsomorphicOut<'a> {
    command: &'static str,
    algebra: &'a str,
    left: &'a str,
    right: &'a str,
    isomorphic: bool,
    forward: Option<Vec<String>>,
    backward: Option<Vec<String>>,
}

fn isomorphic(a: &PairArgs, limits: &Limits) -> Out {
    let (ys, zs) = solve_pair(a, limits)?;
    let iso = sets_isomorphic(&ys.set, &zs.set)?;
    let (forward, backward) = match &iso {
        Some((phi, psi)) => (
            Some(map_terms(phi, &ys.system)?),
            Some(map_terms(psi, &zs.system)?),
        ),
        None => (None, None),
    };
    let out = IsomorphicOut {
        command: "isomorphic",
        algebra: &a.algebra,
        left: &a.source,
        right: &a.target,
        isomorphic: iso.is_some(),
        forward,
        backward,
    };
    let mut t = Text::default();
    t.line("isomorphic", out.isomorphic);
    if let (Some(f), Some(b)) = (&out.forward, &out.backward) {
        t.line("forward", format!("({})", f.join(", ")))
            .line("backward", format!("({})", b.join(", ")));
    }
    Report::new(&out, t.finish())
}
