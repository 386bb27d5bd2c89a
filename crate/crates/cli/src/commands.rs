use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use periodforge::bounds::{
    pattern_search, proof_qps, q_values, random_commuting_probe, solve_box_qp, sweep, sweep_hodge_numbers, CoordinatePattern,
    PatternJson, QMode,
};
use periodforge::contact::{arnold_chart, coupled_generators, verify_contact_chart, ContactChartJson, Partition};
use periodforge::germs::{
    exp_construct, extend_contact, flexibility_family, verify_horizontal, GermChart, GermJson, WChart, WChartJson,
};
use periodforge::hodgedomain::dimension_of_domain;
use periodforge::nilalgebra::{check_integral_element, AlgebraElement, BlocksJson, ElementJson};
use periodforge::rigidity::{compare_germs, element_uniqueness_scan, flexible_element, jet_probe};
use periodforge::scalarforms::{parse_polynomial, ParseContext};
use periodforge::{Exec, HodgeNumbers, DEFAULT_TRUNCATION};

use crate::report::{load, CliError, Report};
use crate::{AlgebraCmd, BoundsCmd, Cli, Command, ContactCmd, GermCmd, HodgeCmd, ModeArg, RigidityCmd, SystemKind};

type Run = Result<(Report, Option<String>), CliError>;

struct Ctx<'a> {
    cli: &'a Cli,
    exec: Exec,
}

impl Ctx<'_> {
    fn report(&self, command: &str, input: Value, result: impl Serialize) -> Result<Report, CliError> {
        Ok(Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            seed: self.cli.seed,
            input,
            result: serde_json::to_value(result)?,
        })
    }

    fn ok(&self, command: &str, input: Value, result: impl Serialize) -> Run {
        Ok((self.report(command, input, result)?, None))
    }
}

fn parse<T: DeserializeOwned>(arg: &str) -> Result<(T, Value), CliError> {
    let v = load(arg)?;
    Ok((serde_json::from_value(v.clone())?, v))
}

fn truncation(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var("PERIODFORGE_TRUNCATION") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Arg(format!("PERIODFORGE_TRUNCATION=`{}` is not a degree", s))),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

pub fn run(cli: &Cli) -> Run {
    let ctx = Ctx {
        cli,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    match &cli.command {
        Command::Hodge(c) => hodge(&ctx, c),
        Command::Algebra(c) => algebra(&ctx, c),
        Command::Contact(c) => contact(&ctx, c),
        Command::Germ(c) => germ(&ctx, c),
        Command::Bounds(c) => bounds(&ctx, c),
        Command::Rigidity(c) => rigidity(&ctx, c),
    }
}

fn hodge(ctx: &Ctx, cmd: &HodgeCmd) -> Run {
    match cmd {
        HodgeCmd::Validate(a) => {
            let (h, v): (HodgeNumbers, _) = parse(&a.hodge)?;
            ctx.ok(
                "hodge validate",
                json!({ "hodge": v }),
                json!({ "valid": true, "hodge": h.to_string(), "k": h.k(), "odd": h.is_odd() }),
            )
        }
        HodgeCmd::Dim(a) => {
            let (h, v): (HodgeNumbers, _) = parse(&a.hodge)?;
            ctx.ok(
                "hodge dim",
                json!({ "hodge": v }),
                json!({
                    "domain": dimension_of_domain(&h),
                    "horizontal": h.horizontal_variables().len(),
                    "reduced": h.reduced_variables().len(),
                    "matrix_size": h.shape().total(),
                }),
            )
        }
    }
}

fn element(h: &HodgeNumbers, arg: &str) -> Result<(AlgebraElement, Value), CliError> {
    let (b, v): (BlocksJson, _) = parse(arg)?;
    Ok((AlgebraElement::from_json(h, &b)?, v))
}

fn algebra(ctx: &Ctx, cmd: &AlgebraCmd) -> Run {
    match cmd {
        AlgebraCmd::Bracket { hodge, x, y } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let (a, av) = element(&h, x)?;
            let (b, bv) = element(&h, y)?;
            let c = a.bracket(&b)?;
            ctx.ok(
                "algebra bracket",
                json!({ "hodge": hv, "x": av, "y": bv }),
                json!({ "bracket": c.to_json(), "is_zero": c.is_zero() }),
            )
        }
        AlgebraCmd::Exp { hodge, x } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let (a, av) = element(&h, x)?;
            let g = a.exp();
            ctx.ok(
                "algebra exp",
                json!({ "hodge": hv, "x": av }),
                json!({ "exp": BlocksJson::from_matrix(&h, g.matrix()) }),
            )
        }
        AlgebraCmd::CheckElement { element } => {
            let (e, v): (ElementJson, _) = parse(element)?;
            let basis = e
                .basis
                .iter()
                .map(|b| AlgebraElement::from_json(&e.hodge, b))
                .collect::<periodforge::Result<Vec<_>>>()?;
            let ie = check_integral_element(&e.hodge, &basis)?;
            let coords = ie.coordinate_matrix();
            let rows: Vec<Vec<String>> = (0..coords.rows())
                .map(|r| coords.row(r).iter().map(|c| c.to_string()).collect())
                .collect();
            let names: Vec<String> = e.hodge.horizontal_variables().iter().map(|v| v.to_string()).collect();
            ctx.ok(
                "algebra check-element",
                json!({ "element": v }),
                json!({ "integral": true, "dim": ie.dim(), "coordinates": names, "basis": rows }),
            )
        }
    }
}

fn contact(ctx: &Ctx, cmd: &ContactCmd) -> Run {
    match cmd {
        ContactCmd::Arnold { n, f, i, j } => {
            let poly = parse_polynomial(f, &ParseContext::contact(*n))?;
            let part = Partition::new(*n, i.iter().copied().collect(), j.iter().copied().collect::<BTreeSet<_>>())?;
            let chart = arnold_chart(*n, &part, &poly)?;
            ctx.ok(
                "contact arnold",
                json!({ "n": n, "f": f, "i": i, "j": j }),
                json!({ "chart": chart.to_json() }),
            )
        }
        ContactCmd::Verify { chart } => {
            let (c, v): (ContactChartJson, _) = parse(chart)?;
            let chart = periodforge::contact::ContactChart::from_json(&c)?;
            let r = verify_contact_chart(&chart);
            let failure = (!r.is_integral).then(|| r.witness.clone().unwrap_or_default());
            Ok((ctx.report("contact verify", json!({ "chart": v }), &r)?, failure))
        }
        ContactCmd::Generators { hodge, system } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let reduced = matches!(system, SystemKind::Reduced);
            let sys = coupled_generators(&h, reduced)?;
            let generators: Vec<Value> = sys
                .generators
                .iter()
                .map(|g| {
                    let eqs: Vec<Value> = g
                        .effective
                        .iter()
                        .map(|&(r, c)| json!({ "entry": [r + 1, c + 1], "form": g.entries.get(r, c).to_string() }))
                        .collect();
                    json!({ "block": format!("{},{}", g.block.0, g.block.1), "equations": eqs })
                })
                .collect();
            ctx.ok(
                "contact generators",
                json!({ "hodge": hv, "system": if reduced { "reduced" } else { "full" } }),
                json!({
                    "num_equations": sys.num_equations(),
                    "variables": sys.variables.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "constraints": sys.constraints,
                    "generators": generators,
                }),
            )
        }
    }
}

fn germ(ctx: &Ctx, cmd: &GermCmd) -> Run {
    match cmd {
        GermCmd::ExpConstruct { element, truncation: t } => {
            let d = truncation(t.truncation)?;
            let (e, v): (ElementJson, _) = parse(element)?;
            let basis = e
                .basis
                .iter()
                .map(|b| AlgebraElement::from_json(&e.hodge, b))
                .collect::<periodforge::Result<Vec<_>>>()?;
            let chart = exp_construct(&e.hodge, &basis, d)?;
            ctx.ok(
                "germ exp-construct",
                json!({ "element": v, "truncation": d }),
                json!({ "chart": chart.to_json() }),
            )
        }
        GermCmd::Verify { chart } => {
            let (c, v): (GermJson, _) = parse(chart)?;
            let chart = GermChart::from_json(&c)?;
            let r = verify_horizontal(&chart);
            let failure = r
                .violations
                .first()
                .map(|w| format!("block ({},{}) entry {:?}: {}", w.block.0, w.block.1, w.entry, w.coefficient));
            Ok((ctx.report("germ verify", json!({ "chart": v }), &r)?, failure))
        }
        GermCmd::Extend { chart } => {
            let (c, v): (WChartJson, _) = parse(chart)?;
            let w = WChart::from_json(&c)?;
            let full = extend_contact(&w)?;
            ctx.ok(
                "germ extend",
                json!({ "chart": v }),
                json!({ "chart": full.to_json(), "is_horizontal": verify_horizontal(&full).is_horizontal }),
            )
        }
        GermCmd::Flex { hodge, f, truncation: t } => {
            let d = truncation(t.truncation)?;
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let count = h.h(h.k() + 1).saturating_sub(1);
            let texts: Vec<String> = if f.is_empty() { vec!["x1".into(); count] } else { f.clone() };
            let polys = texts
                .iter()
                .map(|s| parse_polynomial(s, &ParseContext::params(1)))
                .collect::<periodforge::Result<Vec<_>>>()?;
            let chart = flexibility_family(&h, &polys, d)?;
            ctx.ok(
                "germ flex",
                json!({ "hodge": hv, "f": texts, "truncation": d }),
                json!({ "chart": chart.to_json(), "is_horizontal": verify_horizontal(&chart).is_horizontal }),
            )
        }
    }
}

fn bounds(ctx: &Ctx, cmd: &BoundsCmd) -> Run {
    match cmd {
        BoundsCmd::Q { hodge, mode } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let (m, name) = match mode {
                ModeArg::Printed => (QMode::AsPrinted, "printed"),
                ModeArg::Proof => (QMode::ProofDerived, "proof"),
            };
            ctx.ok("bounds q", json!({ "hodge": hv, "mode": name }), q_values(&h, m))
        }
        BoundsCmd::Qp { hodge } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let qps = proof_qps(&h);
            let solutions: Vec<Value> = qps
                .iter()
                .map(|qp| {
                    json!({
                        "program": qp,
                        "objective": qp.objective.to_string(),
                        "solution": solve_box_qp(qp, ctx.exec),
                    })
                })
                .collect();
            let max = qps.iter().map(|qp| solve_box_qp(qp, ctx.exec).max).max();
            ctx.ok("bounds qp", json!({ "hodge": hv }), json!({ "max": max, "programs": solutions }))
        }
        BoundsCmd::Search { hodge, budget, keep } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let r = pattern_search(&h, *budget, *keep, ctx.exec)?;
            let witness = r.witness.integral_element().is_ok();
            ctx.ok(
                "bounds search",
                json!({ "hodge": hv, "budget": budget, "keep": keep }),
                json!({
                    "best": r.best,
                    "exhaustive": r.exhaustive,
                    "fallback": r.fallback,
                    "witness": r.witness.to_json().entries,
                    "witness_validated": witness,
                    "num_maximum": r.num_maximum,
                    "maximum_patterns": r.maximum_patterns.iter().map(|p| p.to_json().entries).collect::<Vec<_>>(),
                }),
            )
        }
        BoundsCmd::Sweep {
            max_weight,
            max_h,
            budget,
            families,
        } => {
            let report = sweep(*max_weight, *max_h, *budget, ctx.exec)?;
            let probe = if *families > 0 {
                let hs = sweep_hodge_numbers(*max_weight, *max_h);
                Some(random_commuting_probe(&hs, *families, ctx.cli.seed, ctx.exec)?)
            } else {
                None
            };
            ctx.ok(
                "bounds sweep",
                json!({ "max_weight": max_weight, "max_h": max_h, "budget": budget, "families": families }),
                json!({ "sweep": report, "probe": probe }),
            )
        }
    }
}

fn rigidity(ctx: &Ctx, cmd: &RigidityCmd) -> Run {
    match cmd {
        RigidityCmd::Probe {
            hodge,
            pattern,
            element,
            flexible,
            degree,
        } => {
            let d = truncation(*degree)?;
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let (pat, basis, pv, ev) = if *flexible {
                let (p, e) = flexible_element(&h)?;
                (p, Some(e), Value::Null, Value::Null)
            } else {
                let (pj, pv): (PatternJson, _) = parse(pattern.as_deref().expect("required by clap"))?;
                if pj.hodge != h {
                    return Err(periodforge::Error::ShapeMismatch(format!(
                        "pattern is for {} but --hodge is {}",
                        pj.hodge, h
                    ))
                    .into());
                }
                let p = CoordinatePattern::from_json(&pj)?;
                match element {
                    Some(arg) => {
                        let (e, ev): (ElementJson, _) = parse(arg)?;
                        let basis = e
                            .basis
                            .iter()
                            .map(|b| AlgebraElement::from_json(&h, b))
                            .collect::<periodforge::Result<Vec<_>>>()?;
                        (p, Some(basis), pv, ev)
                    }
                    None => (p, None, pv, Value::Null),
                }
            };
            let r = jet_probe(&pat, basis.as_deref(), d, ctx.exec)?;
            ctx.ok(
                "rigidity probe",
                json!({ "hodge": hv, "pattern": pv, "element": ev, "flexible": flexible, "degree": d }),
                json!({
                    "report": r.report,
                    "chart": r.canonical.to_json(),
                    "alternative": r.alternative.map(|c| c.to_json()),
                }),
            )
        }
        RigidityCmd::Scan {
            hodge,
            budget,
            keep,
            samples,
        } => {
            let (h, hv): (HodgeNumbers, _) = parse(&hodge.hodge)?;
            let r = element_uniqueness_scan(&h, *budget, *keep, *samples, ctx.cli.seed, ctx.exec)?;
            ctx.ok(
                "rigidity scan",
                json!({ "hodge": hv, "budget": budget, "keep": keep, "samples": samples }),
                r,
            )
        }
        RigidityCmd::Compare { a, b } => {
            let (ja, av): (GermJson, _) = parse(a)?;
            let (jb, bv): (GermJson, _) = parse(b)?;
            let r = compare_germs(&GermChart::from_json(&ja)?, &GermChart::from_json(&jb)?)?;
            ctx.ok("rigidity compare", json!({ "a": av, "b": bv }), r)
        }
    }
}
