//! Command dispatch: problem in, report out.

use num_traits::Zero;

use atlas_core::atlas::{
    b_extra_violations, classify, fiber_consistency, membership_b, outer_period, single_automorphism_invariants,
    z_violations, CharacteristicWitness,
};
use atlas_core::cochain::Cochain;
use atlas_core::engine::{is_cocycle, multicharacter_class, RowSet, WitnessSolver};
use atlas_core::families::{ParameterA, ParameterB};
use atlas_core::groups::ModulusData;
use atlas_core::hjr::{a_hat, delta_map, h2_class, partial_qm, res_map};
use atlas_core::num::{fmt_rat, is_integer, rat_int, Int};
use atlas_core::poly::Poly;
use atlas_core::resolution::{resolve_third_cocycle, third_cocycle_c_a, verify_resolution};
use atlas_core::verify::run_suite;
use atlas_core::AtlasError;

use crate::error::CliError;
use crate::problem::{CochainSpec, Problem};
use crate::report::*;

/// Largest number of grid points a `--grid-bound` check may visit.
pub const GRID_LIMIT: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Coboundary,
    Invariants,
    Resolve,
    Hjr,
    Class,
}

/// Command-line flags; they override the problem file's `options`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub witness: bool,
    pub grid_bound: Option<u32>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

/// A report together with the property failure it records, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(body: Body) -> Self {
        Outcome { report: Report::new(body), failure: None }
    }
}

pub fn run_file(cmd: Command, path: &std::path::Path, flags: &Flags) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    run_problem(cmd, &Problem::parse(&text)?, flags)
}

pub fn run_problem(cmd: Command, p: &Problem, flags: &Flags) -> Result<Outcome, CliError> {
    match cmd {
        Command::Coboundary => coboundary(p, flags),
        Command::Invariants => invariants(p),
        Command::Resolve => resolve(p, flags),
        Command::Hjr => hjr(p),
        Command::Class => class(p, flags),
    }
}

pub fn run_verify(suite: &str, seed: u64, samples: Option<usize>) -> Result<Outcome, CliError> {
    let rep = run_suite(suite, seed, samples)?;
    let passed = rep.passed();
    let body = Body::Verify(VerifyReport {
        suite: rep.suite.clone(),
        seed,
        samples,
        passed,
        checks: rep.checks.iter().map(|c| CheckJson { name: c.name.clone(), passed: c.passed, detail: c.detail.clone() }).collect(),
        findings: rep.findings.clone(),
    });
    let failure = (!passed).then(|| CliError::Property(format!("suite {suite} failed")));
    Ok(Outcome { report: Report::new(body), failure })
}

fn require_z(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<(), CliError> {
    if let Some(v) = z_violations(a, b, m)?.first() {
        return Err(CliError::Precondition(v.to_string()));
    }
    Ok(())
}

fn lattice_data(a: &ParameterA, b: &ParameterB, m: &ModulusData) -> Result<(ClassesJson, bool, Membership, Vec<String>), CliError> {
    require_z(a, b, m)?;
    let classes = classify(a, b, m)?;
    let violations: Vec<String> = b_extra_violations(a, b, m)?.iter().map(ToString::to_string).collect();
    let membership = Membership { z: true, b: membership_b(a, b, m)? };
    Ok((ClassesJson::from_classes(&classes)?, classes.is_zero(), membership, violations))
}

fn coboundary(p: &Problem, flags: &Flags) -> Result<Outcome, CliError> {
    let (source, c) = match p.cochain()? {
        Some(c) => ("cochain", c),
        None if !p.a.is_empty() => ("c_a", third_cocycle_c_a(&p.parameter_a()?)?),
        None => return Err(CliError::Input("coboundary needs a cochain or an a-parameter".into())),
    };
    let cocycle = is_cocycle(&c);
    let abelian = !c.flavor().has_central();
    let class = if cocycle && abelian { Some(class_entries(&multicharacter_class(&c)?)) } else { None };
    let mut solver = WitnessSolver::new();
    let (is_coboundary, f) = match (cocycle, &class) {
        (false, _) => (None, None),
        (true, Some(cl)) if !cl.is_empty() => (Some(false), None),
        (true, _) if c.arity() == 0 => (Some(c.is_trivial_mod_one()), None),
        (true, _) => {
            let f = solver.solve(&c, RowSet::All)?;
            if abelian && f.is_none() {
                return Err(CliError::Property("zero class but no witness in the capped basis".into()));
            }
            (Some(f.is_some()), f)
        }
    };
    let witness = match (&f, flags.witness) {
        (Some(f), true) => {
            if !f.boundary().sub(&c)?.is_trivial_mod_one() {
                return Err(CliError::Property("witness failed verification".into()));
            }
            Some(WitnessJson { display: f.to_string(), cochain: CochainSpec::from_cochain(f) })
        }
        _ => None,
    };
    let grid_bound = flags.grid_bound.or(p.options.grid_bound);
    let grid_check = match grid_bound {
        Some(n) => Some(grid_check(&c, witness.as_ref().and(f.as_ref()), n)?),
        None => None,
    };
    let failure = grid_check.as_ref().and_then(|g| {
        let bad = (cocycle && g.cocycle_defects > 0) || g.witness_defects.unwrap_or(0) > 0;
        bad.then(|| CliError::Property("grid evaluation contradicts the symbolic result".into()))
    });
    let body = Body::Coboundary(CoboundaryReport {
        source: source.into(),
        flavor: c.flavor().name().into(),
        rank: c.rank(),
        arity: c.arity(),
        cochain: c.to_string(),
        is_cocycle: cocycle,
        class,
        is_coboundary,
        witness,
        grid_check,
    });
    Ok(Outcome { report: Report::new(body), failure })
}

/// Number of points of the box `[-bound, bound]` over the coordinates `q`
/// involves, and how many of them give a non-integer value.
fn box_defects(q: &Poly, bound: u32) -> Result<(u64, u64), CliError> {
    let support = q.support();
    let side = 2 * u64::from(bound) + 1;
    let points = u32::try_from(support.len())
        .ok()
        .and_then(|k| side.checked_pow(k))
        .filter(|&n| n <= GRID_LIMIT)
        .ok_or_else(|| CliError::Input(format!("grid of side {side} in {} coordinates exceeds {GRID_LIMIT} points", support.len())))?;
    let lo = -i64::from(bound);
    let mut digits = vec![lo; support.len()];
    let mut x = vec![Int::zero(); q.nvars()];
    let mut defects = 0u64;
    for _ in 0..points {
        for (d, &v) in digits.iter().zip(&support) {
            x[v] = Int::from(*d);
        }
        defects += u64::from(!is_integer(&q.eval(&x)));
        for d in digits.iter_mut() {
            if *d < i64::from(bound) {
                *d += 1;
                break;
            }
            *d = lo;
        }
    }
    Ok((points, defects))
}

/// Exhaustive evaluation of `∂c`, and of `∂f - c` for a witness `f`.
fn grid_check(c: &Cochain, f: Option<&Cochain>, bound: u32) -> Result<GridCheck, CliError> {
    let (cocycle_points, cocycle_defects) = box_defects(c.boundary().poly(), bound)?;
    let witness = f.map(|f| f.boundary().sub(c)).transpose()?.map(|d| box_defects(d.poly(), bound)).transpose()?;
    Ok(GridCheck {
        bound,
        cocycle_points,
        cocycle_defects,
        witness_points: witness.map(|w| w.0),
        witness_defects: witness.map(|w| w.1),
    })
}

fn invariants(p: &Problem) -> Result<Outcome, CliError> {
    let m = p.modulus()?;
    let (a, b) = (p.parameter_a()?, p.parameter_b()?);
    let (classes, zero, membership, b_violations) = lattice_data(&a, &b, &m)?;
    let obstruction = ObstructionJson::from_obstruction(&delta_map(&a, &b, &m)?)?;
    let single_automorphism = if m.rank() == 1 { Some(single_record(&m, &b)?) } else { None };
    Ok(Outcome::ok(Body::Invariants(InvariantsReport {
        modulus: ModulusJson::from_modulus(&m)?,
        membership,
        b_violations,
        classes,
        zero,
        fiber_consistent: fiber_consistency(&b, &m)?,
        obstruction,
        single_automorphism,
    })))
}

/// `λ(b_1; ·)` is the character `χ(z_0) = b(1,0)`, `χ(z_1) = b(1,1)`;
/// `(x, y)` are its values on `w_0 = u_1 z_0 - v_1 z_1`, `w_1 = -s_1 z_0 + r_1 z_1`.
fn single_record(m: &ModulusData, b: &ParameterB) -> Result<SingleAutomorphismJson, CliError> {
    let s = single_automorphism_invariants(m.pi(1), m.qi(1))?;
    let (b0, b1) = (b.get(1, 0), b.get(1, 1));
    let x = rat_int(&s.u1) * &b0 - rat_int(&s.v1) * &b1;
    let y = -rat_int(&s.s1) * &b0 + rat_int(&s.r1) * &b1;
    let pair = |v: &[Int; 2]| Ok::<_, CliError>([small(&v[0])?, small(&v[1])?]);
    Ok(SingleAutomorphismJson {
        p1: small(&s.p1)?,
        q1: small(&s.q1)?,
        d1: small(&s.d1)?,
        u1: small(&s.u1)?,
        v1: small(&s.v1)?,
        r1: small(&s.r1)?,
        s1: small(&s.s1)?,
        w0: pair(&s.w0)?,
        w1: pair(&s.w1)?,
        b1: pair(&s.b1())?,
        b1_in_w: pair(&s.b1_in_w_basis()?)?,
        quotient: s.quotient_presentation(),
        lambda: s.lambda_presentation(),
        outer_period: small(&outer_period(&x, &y, &s.p1, &s.q1)?)?,
        character: Character { x: fmt_rat(&x), y: fmt_rat(&y) },
    })
}

fn resolve(p: &Problem, flags: &Flags) -> Result<Outcome, CliError> {
    let a = p.parameter_a()?;
    let c = third_cocycle_c_a(&a)?;
    let b = resolve_third_cocycle(&a)?;
    let samples = flags.samples.or(p.options.samples).unwrap_or(100);
    let seed = flags.seed.or(p.options.seed).unwrap_or(0);
    let rep = verify_resolution(&a, &b, samples, seed)?;
    let passed = rep.passed();
    let body = Body::Resolve(ResolveReport {
        rank: a.rank,
        c_a: c.to_string(),
        b_a: WitnessJson { display: b.to_string(), cochain: CochainSpec::from_cochain(&b) },
        symbolic_zero: rep.symbolic_zero,
        samples,
        seed,
        failures: rep.failures,
        max_deviation: fmt_rat(&rep.max_deviation),
        passed,
    });
    let failure = (!passed).then(|| CliError::Property("the resolution identity fails".into()));
    Ok(Outcome { report: Report::new(body), failure })
}

fn hjr(p: &Problem) -> Result<Outcome, CliError> {
    let m = p.modulus()?;
    let (a, b) = (p.parameter_a()?, p.parameter_b()?);
    let delta = delta_map(&a, &b, &m)?;
    let (h2, res, h2_unavailable) = match h2_class(&a) {
        Ok(h) => (Some(H2Json::from_class(&h)?), Some(ClassesJson::from_classes(&res_map(&a, &m)?)?), None),
        Err(AtlasError::Precondition(msg)) => (None, None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let hat = a_hat(&a);
    let a_hat = hat
        .entries()
        .iter()
        .map(|(&(i, j, k), v)| ClassEntry { indices: vec![i, j, k], value: fmt_rat(v) })
        .collect();
    Ok(Outcome::ok(Body::Hjr(HjrReport {
        modulus: ModulusJson::from_modulus(&m)?,
        h2,
        res,
        h2_unavailable,
        a_hat,
        delta: ObstructionJson::from_obstruction(&delta)?,
        partial_qm: class_entries(&partial_qm(&hat, &m)?),
    })))
}

fn class(p: &Problem, flags: &Flags) -> Result<Outcome, CliError> {
    let m = p.modulus()?;
    let (a, b) = (p.parameter_a()?, p.parameter_b()?);
    let (classes, zero, membership, b_violations) = lattice_data(&a, &b, &m)?;
    let witness = if flags.witness {
        let coboundary = CharacteristicWitness::new(&m)?.is_coboundary(&a, &b)?;
        Some(WitnessCheck { coboundary, agrees: coboundary == zero && coboundary == membership.b })
    } else {
        None
    };
    let failure = match &witness {
        Some(w) if !w.agrees => Some(CliError::Property("class, B-membership and witness oracle disagree".into())),
        _ => None,
    };
    let body = Body::Class(ClassReport { modulus: ModulusJson::from_modulus(&m)?, membership, b_violations, classes, zero, witness });
    Ok(Outcome { report: Report::new(body), failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(body: &str) -> Problem {
        Problem::parse(&format!(r#"{{"schema":"atlas-problem/1",{body}}}"#)).unwrap()
    }

    fn witness() -> Flags {
        Flags { witness: true, ..Flags::default() }
    }

    #[test]
    fn trivial_cochain_is_a_coboundary_with_zero_witness() {
        let p = problem(r#""rank":2,"cochain":{"flavor":"G","arity":2,"terms":[]}"#);
        let out = run_problem(Command::Coboundary, &p, &witness()).unwrap();
        let Body::Coboundary(r) = out.report.body else { panic!() };
        assert!(r.is_cocycle);
        assert_eq!(r.class, Some(vec![]));
        assert_eq!(r.is_coboundary, Some(true));
        assert_eq!(r.witness.unwrap().display, "0");
    }

    #[test]
    fn c_a_on_z3_has_class_one_half() {
        let p = problem(r#""rank":3,"a":[{"indices":[1,2,3],"value":"1/2"}]"#);
        let out = run_problem(Command::Coboundary, &p, &Flags::default()).unwrap();
        let Body::Coboundary(r) = out.report.body else { panic!() };
        assert!(r.is_cocycle);
        assert_eq!(r.class, Some(vec![ClassEntry { indices: vec![1, 2, 3], value: "1/2".into() }]));
        assert_eq!(r.is_coboundary, Some(false));
    }

    #[test]
    fn rank_one_invariants() {
        let p = problem(r#""rank":1,"p":[4],"q":[2],"b":[{"indices":[1,1],"value":"1/2"}]"#);
        let out = run_problem(Command::Invariants, &p, &Flags::default()).unwrap();
        let Body::Invariants(r) = out.report.body else { panic!() };
        assert_eq!(
            r.classes.b_ii[0].coords,
            vec![CoordJson::Cyclic { modulus: 2, value: "0".into() }, CoordJson::Circle { circle: "1/2".into() }]
        );
        let s = r.single_automorphism.unwrap();
        assert_eq!((s.d1, s.b1_in_w), (2, [0, 2]));
        assert_eq!(s.lambda, "T + Z_2");
    }

    #[test]
    fn empty_parameters_give_zero_invariants() {
        let p = problem(r#""rank":2,"p":[2,3],"q":[1,0]"#);
        let out = run_problem(Command::Invariants, &p, &Flags::default()).unwrap();
        let Body::Invariants(r) = out.report.body else { panic!() };
        assert!(r.zero && r.obstruction.zero);
        assert!(r.membership.b);
    }

    #[test]
    fn z_violation_is_a_precondition_error() {
        let p = problem(r#""rank":2,"p":[2,4],"q":[0,2],"b":[{"indices":[1,2],"value":"1/8"}]"#);
        let err = run_problem(Command::Invariants, &p, &Flags::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("Z-b at (i,j)=(1,2)"), "{err}");
    }

    #[test]
    fn class_witness_agrees() {
        let p = problem(r#""rank":2,"p":[2,2],"b":[{"indices":[1,2],"value":"1/2"}]"#);
        let out = run_problem(Command::Class, &p, &witness()).unwrap();
        assert!(out.failure.is_none());
        let Body::Class(r) = out.report.body else { panic!() };
        assert!(r.witness.unwrap().agrees);
    }

    #[test]
    fn hjr_without_integral_as_a() {
        let p = problem(r#""rank":3,"p":[2,2,2],"a":[{"indices":[1,2,3],"value":"1/2"}]"#);
        let out = run_problem(Command::Hjr, &p, &Flags::default()).unwrap();
        let Body::Hjr(r) = out.report.body else { panic!() };
        assert!(r.h2.is_none() && r.h2_unavailable.is_some());
        assert_eq!(r.delta.a_sector[0].coord, CoordJson::Cyclic { modulus: 2, value: "1".into() });
        assert_eq!(r.partial_qm, vec![ClassEntry { indices: vec![1, 2, 3], value: "1/2".into() }]);
    }

    #[test]
    fn resolve_passes() {
        let p = problem(r#""rank":3,"a":[{"indices":[1,2,3],"value":"1/3"}],"options":{"samples":20}"#);
        let out = run_problem(Command::Resolve, &p, &Flags::default()).unwrap();
        assert!(out.failure.is_none());
    }

    #[test]
    fn grid_check_on_a_witness() {
        let p = problem(r#""rank":1,"cochain":{"flavor":"G","arity":2,"terms":[{"coeff":"1/2","slots":[["e1"],["e1"]]}]}"#);
        let flags = Flags { witness: true, grid_bound: Some(3), ..Flags::default() };
        let out = run_problem(Command::Coboundary, &p, &flags).unwrap();
        assert!(out.failure.is_none());
        let Body::Coboundary(r) = out.report.body else { panic!() };
        let g = r.grid_check.unwrap();
        assert_eq!((g.cocycle_points, g.cocycle_defects), (1, 0));
        assert_eq!((g.witness_points, g.witness_defects), (Some(7u64.pow(2)), Some(0)));
    }

    #[test]
    fn unknown_suite_is_an_input_error() {
        assert_eq!(run_verify("nope", 0, None).unwrap_err().exit_code(), 2);
    }
}
