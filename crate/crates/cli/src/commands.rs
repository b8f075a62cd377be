use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use ffgaps::budget::Budget;
use ffgaps::experiments::{self, parse_kv, PipelineConfig, SieveRun};
use ffgaps::factorizer::{enumerate_irreducibles, factorize_with_seed, DEFAULT_SEED};
use ffgaps::ffcore::{FieldCtx, Poly};
use ffgaps::geometry;
use ffgaps::primroots::{
    gap_report, is_eligible, is_primitive_polynomial, is_primitive_root, multiplicative_order,
    primitive_count,
};
use ffgaps::sieve::{build_admissible_tuple, is_admissible, TupleH};
use ffgaps::symbols::{symbol_composite, symbol_jacobi, SymbolValue};
use ffgaps::Error;

use crate::manifest::RunManifest;
use crate::render::{genus, poly, polys, rat, tsv_object};
use crate::{Cli, CliError, Command, DensityArgs, GenusCmd, Method, PrimrootCmd, SieveCmd, TupleCmd};

type Res<T> = std::result::Result<T, CliError>;

/// A command's result in both output formats.
struct Output {
    json: Value,
    text: String,
    config: Option<PipelineConfig>,
    /// Whether the manifest is part of the printed result.
    embed_manifest: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            config: None,
            embed_manifest: false,
        }
    }
}

pub fn run(cli: &Cli) -> Res<()> {
    let budget = Budget::from_env();
    let start = Instant::now();
    let out = match &cli.command {
        Command::Field { q, elements } => field(*q, *elements)?,
        Command::Factor { q, seed, polys } => return factor(*q, seed.unwrap_or(DEFAULT_SEED), polys),
        Command::Symbol {
            q,
            d,
            method,
            a,
            b,
        } => symbol(*q, *d, *method, a, b)?,
        Command::Primroot(cmd) => primroot(cmd, budget)?,
        Command::Tuple(cmd) => tuple(cmd, budget)?,
        Command::Sieve(SieveCmd::Run { config }) => sieve_run(config, budget)?,
        Command::Genus(cmd) => genus_cmd(cmd)?,
        Command::Density(args) => density(args, budget)?,
        Command::Example5 { q, g } => example5(*q, g, budget)?,
        Command::Pipeline { config } => pipeline(config, budget)?,
    };
    let mut manifest = RunManifest::new(&out.json, budget.cap(), start.elapsed());
    if let Some(cfg) = &out.config {
        manifest.config = Some(cfg.snapshot());
        manifest.seed = Some(cfg.seed);
    }
    if out.embed_manifest {
        let doc = json!({ "result": out.json, "manifest": manifest.to_json() });
        emit(&(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"));
    } else if cli.json {
        emit(&(serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"));
    } else {
        emit(&out.text);
    }
    if let Some(path) = &cli.manifest {
        let text = serde_json::to_string_pretty(&manifest.to_json()).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

fn ctx(q: u64) -> Res<FieldCtx> {
    Ok(FieldCtx::new(q)?)
}

fn parse(ctx: &FieldCtx, s: &str) -> Res<Poly> {
    Ok(ctx.parse_poly(s)?)
}

fn parse_list(ctx: &FieldCtx, s: &str) -> Res<Vec<Poly>> {
    s.split(',').map(|x| parse(ctx, x.trim())).collect()
}

fn field(q: u64, elements: bool) -> Res<Output> {
    let f = ctx(q)?;
    let modulus = match f.modulus() {
        Some(c) => {
            let coeffs = c.iter().map(|&x| f.elem(x).expect("prime field digit")).collect();
            // digits are prime-field elements, so the polynomial prints over F_p
            let fp = ctx(u64::from(f.characteristic()))?;
            fp.fmt_poly(&Poly::from_coeffs(coeffs)).replace('t', "a")
        }
        None => "-".to_string(),
    };
    let mut v = json!({
        "q": f.q(),
        "characteristic": f.characteristic(),
        "degree": f.ext_degree(),
        "modulus": modulus,
        "generator": f.fmt_elem(f.generator()),
        "unit_order": f.unit_order(),
    });
    let mut text = tsv_object(&v);
    if elements {
        let rows: Vec<Value> = f
            .elements()
            .map(|x| {
                json!({
                    "index": x.index(),
                    "element": f.fmt_elem(x),
                    "log": f.dlog(x),
                    "order": f.order(x),
                })
            })
            .collect();
        text.push_str("index\telement\tlog\torder\n");
        for r in &rows {
            let opt = |k: &str| match &r[k] {
                Value::Null => "-".to_string(),
                x => x.to_string(),
            };
            text.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r["index"],
                r["element"].as_str().unwrap(),
                opt("log"),
                opt("order")
            ));
        }
        v["elements"] = Value::Array(rows);
    }
    Ok(Output::new(v, text))
}

fn factor(q: u64, seed: u64, inputs: &[String]) -> Res<()> {
    let f = ctx(q)?;
    let lines: Vec<String> = if inputs.is_empty() {
        std::io::stdin()
            .lock()
            .lines()
            .map(|l| l.map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Res<Vec<_>>>()?
            .into_iter()
            .filter(|l| !l.trim().is_empty())
            .collect()
    } else {
        inputs.to_vec()
    };
    for line in lines {
        let p = parse(&f, &line)?;
        let fac = factorize_with_seed(&p, &f, seed)?;
        let factors: Vec<Value> = fac
            .parts
            .iter()
            .map(|(p, e)| json!({ "p": poly(&f, p), "e": e }))
            .collect();
        let irreducible = fac.parts.len() == 1 && fac.parts[0].1 == 1;
        let v = json!({
            "input": line.trim(),
            "poly": poly(&f, &p),
            "unit": f.fmt_elem(fac.unit),
            "factors": factors,
            "irreducible": irreducible,
            "squarefree": fac.is_squarefree(),
            "seed": seed,
        });
        emit(&(serde_json::to_string(&v).expect("serializable") + "\n"));
    }
    Ok(())
}

fn symbol_json(f: &FieldCtx, s: &SymbolValue) -> Value {
    json!({ "value": f.fmt_elem(s.value), "dlog": s.dlog })
}

fn symbol(q: u64, d: u32, method: Method, a: &str, b: &str) -> Res<Output> {
    let f = ctx(q)?;
    let (pa, pb) = (parse(&f, a)?, parse(&f, b)?);
    let exp = match method {
        Method::Exp | Method::Both => Some(symbol_composite(&pa, &pb, d, &f)?),
        Method::Reciprocity => None,
    };
    let rec = match method {
        Method::Reciprocity | Method::Both => Some(symbol_jacobi(&pa, &pb, d, &f)?),
        Method::Exp => None,
    };
    if let (Some(x), Some(y)) = (&exp, &rec) {
        if x != y {
            return Err(Error::Mismatch(format!(
                "({a}/{b})_{d}: exponentiation gives {}, reciprocity gives {}",
                f.fmt_elem(x.value),
                f.fmt_elem(y.value)
            ))
            .into());
        }
    }
    let value = exp.as_ref().or(rec.as_ref()).unwrap();
    let v = json!({
        "a": poly(&f, &pa),
        "b": poly(&f, &pb),
        "d": d,
        "value": f.fmt_elem(value.value),
        "dlog": value.dlog,
        "exp": exp.as_ref().map(|s| symbol_json(&f, s)),
        "reciprocity": rec.as_ref().map(|s| symbol_json(&f, s)),
    });
    let text = format!("{}\t{}\n", f.fmt_elem(value.value), value.dlog);
    Ok(Output::new(v, text))
}

fn primroot(cmd: &PrimrootCmd, budget: Budget) -> Res<Output> {
    match cmd {
        PrimrootCmd::Scan {
            q,
            g,
            lo,
            hi,
            tuple,
            m,
        } => {
            let f = ctx(*q)?;
            let pg = parse(&f, g)?;
            if !is_eligible(&pg, &f)? {
                eprintln!("warning: g = {g} is a v-th power for a prime v | q - 1; P_g is empty");
            }
            let h = tuple.as_deref().map(|s| parse_list(&f, s)).transpose()?;
            let threshold = m.unwrap_or_else(|| h.as_ref().map_or(1, |h| h.len().min(2)));
            let report = gap_report(
                &pg,
                (*lo, *hi),
                h.as_deref().map(|h| (h, threshold)),
                &f,
                budget,
            )?;
            let mut text = String::from("degree\tprime\tgap_norm\n");
            for (i, p) in report.primes.iter().enumerate() {
                let gap = match i {
                    0 => "-".to_string(),
                    _ => report.gaps[i - 1].norm.to_string(),
                };
                text.push_str(&format!("{}\t{}\t{gap}\n", p.degree().unwrap(), f.fmt_poly(p)));
            }
            let hits: Vec<Value> = report
                .hits
                .iter()
                .map(|hit| json!({ "f": poly(&f, &hit.f), "members": hit.members }))
                .collect();
            for hit in &report.hits {
                let members: Vec<String> = hit.members.iter().map(|i| i.to_string()).collect();
                text.push_str(&format!("hit\t{}\t{}\n", f.fmt_poly(&hit.f), members.join(",")));
            }
            let v = json!({
                "g": poly(&f, &pg),
                "degree_range": [lo, hi],
                "primes": polys(&f, &report.primes),
                "gaps": report.gaps.iter().map(|x| x.norm.to_string()).collect::<Vec<_>>(),
                "max_gap": report.max_gap().map(|x| x.norm.to_string()),
                "hits": hits,
            });
            Ok(Output::new(v, text))
        }
        PrimrootCmd::Count { q, n } => {
            let f = ctx(*q)?;
            let mut brute = 0u64;
            for p in enumerate_irreducibles(*n, &f, budget)? {
                brute += u64::from(is_primitive_polynomial(&p, &f)?);
            }
            let formula = primitive_count(f.q(), *n)?;
            let agree = BigUint::from(brute) == formula;
            if !agree {
                return Err(Error::Mismatch(format!(
                    "brute force {brute} != phi(q^n - 1)/n = {formula}"
                ))
                .into());
            }
            let v = json!({ "q": q, "n": n, "brute_force": brute, "formula": formula.to_string() });
            Ok(Output::new(v.clone(), tsv_object(&v)))
        }
        PrimrootCmd::Check { q, g, p } => {
            let f = ctx(*q)?;
            let (pg, pp) = (parse(&f, g)?, parse(&f, p)?);
            let order = multiplicative_order(&pg, &pp, &f)?;
            let primitive = is_primitive_root(&pg, &pp, &f)?;
            let v = json!({
                "g": poly(&f, &pg),
                "p": poly(&f, &pp),
                "order": order.to_string(),
                "primitive": primitive,
            });
            Ok(Output::new(v.clone(), tsv_object(&v)))
        }
    }
}

fn tuple_json(f: &FieldCtx, h: &TupleH) -> Value {
    let cert: Vec<Value> = h
        .certificate()
        .iter()
        .map(|(p, r)| json!({ "prime": poly(f, p), "omitted": poly(f, r) }))
        .collect();
    let (lo, hi) = h.degree_range();
    json!({
        "k": h.k(),
        "elements": polys(f, h.elements()),
        "degree_range": [lo, hi],
        "max_gap_norm": h.max_gap_norm(f).to_string(),
        "g_multiple": h.g_multiple(),
        "certificate": cert,
    })
}

fn tuple(cmd: &TupleCmd, budget: Budget) -> Res<Output> {
    match cmd {
        TupleCmd::Build { q, k, g } => {
            let f = ctx(*q)?;
            let h = build_admissible_tuple(*k, &f, &parse(&f, g)?, budget)?;
            let v = tuple_json(&f, &h);
            let mut text = String::new();
            for e in h.elements() {
                text.push_str(&format!("{}\t{}\n", e.degree().unwrap(), f.fmt_poly(e)));
            }
            let (lo, hi) = h.degree_range();
            text.push_str(&format!("# k = {}; degrees {lo}..{hi}; max gap norm {}\n", h.k(), h.max_gap_norm(&f)));
            Ok(Output::new(v, text))
        }
        TupleCmd::Check { q, elements } => {
            let f = ctx(*q)?;
            let es = elements
                .iter()
                .map(|s| parse(&f, s))
                .collect::<Res<Vec<_>>>()?;
            let check = is_admissible(&es, &f, budget)?;
            let omitted: Vec<Value> = check
                .omitted
                .iter()
                .map(|(p, r)| json!({ "prime": poly(&f, p), "omitted": poly(&f, r) }))
                .collect();
            let v = json!({
                "admissible": check.admissible,
                "omitted": omitted,
                "covered": polys(&f, &check.covered),
            });
            let mut text = format!("admissible\t{}\n", check.admissible);
            for (p, r) in &check.omitted {
                text.push_str(&format!("omits\t{}\t{}\n", f.fmt_poly(p), f.fmt_poly(r)));
            }
            for p in &check.covered {
                text.push_str(&format!("covers\t{}\n", f.fmt_poly(p)));
            }
            Ok(Output::new(v, text))
        }
    }
}

/// Reads a config file; `tuple_file = PATH` (relative to the config) supplies
/// one tuple element per line.
fn load_config(path: &Path) -> Res<PipelineConfig> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("reading {}: {e}", p.display())))
    };
    let text = read(path)?;
    let mut lines = Vec::new();
    for (k, v) in parse_kv(&text)? {
        if k == "tuple_file" {
            let file = path.parent().unwrap_or(Path::new(".")).join(&v);
            let items: Vec<String> = read(&file)?
                .lines()
                .map(|l| l.split('#').next().unwrap().trim().to_string())
                .filter(|l| !l.is_empty())
                .collect();
            lines.push(format!("tuple = {}", items.join(", ")));
        } else {
            lines.push(format!("{k} = {v}"));
        }
    }
    Ok(PipelineConfig::parse(&lines.join("\n"))?)
}

fn sieve_json(run: &SieveRun) -> Value {
    let setup = &run.setup;
    let f = &setup.ctx;
    let s = &run.sums;
    let per_m: Vec<Value> = s
        .per_m
        .iter()
        .map(|x| json!({ "plain": rat(&x.plain), "tilde": rat(&x.tilde) }))
        .collect();
    json!({
        "q": f.q(),
        "k": setup.config.k,
        "l": setup.config.ell,
        "theta": rat(&setup.config.theta),
        "deg_r": setup.config.deg_r(),
        "g": poly(f, &setup.g),
        "w": poly(f, &setup.config.w),
        "alpha": poly(f, &setup.config.alpha),
        "F": setup.config.f.to_string(),
        "tuple": tuple_json(f, &setup.tuple),
        "weights": {
            "nonzero": run.weight_count,
            "lambda_one": rat(&run.lambda_one),
        },
        "sums": {
            "class_size": s.class_size,
            "s1": rat(&s.s1),
            "s2": rat(&s.s2),
            "s2_tilde": rat(&s.s2_tilde),
            "s2_minus_s2_tilde": rat(&s.difference()),
            "per_shift": per_m,
        },
        "main_terms": {
            "s1": rat(&run.main.s1),
            "s2": rat(&run.main.s2),
            "i_k": rat(&run.main.i_k),
            "j_sum": rat(&run.main.j_sum),
        },
    })
}

fn sieve_run(path: &Path, budget: Budget) -> Res<Output> {
    let cfg = load_config(path)?;
    let run = experiments::run_sieve(&cfg, budget)?;
    let v = sieve_json(&run);
    Ok(Output {
        text: String::new(),
        json: v,
        config: Some(cfg),
        embed_manifest: true,
    })
}

fn pipeline(path: &Path, budget: Budget) -> Res<Output> {
    let cfg = load_config(path)?;
    let report = experiments::pipeline(&cfg, budget)?;
    let f = &report.sieve.setup.ctx;
    let verification = report.verification.as_ref().map(|v| {
        json!({
            "passed": v.passed(),
            "checked": v.checked,
            "exhaustive_degrees": v.exhaustive_degrees,
            "sampled_degrees": v.sampled_degrees,
            "inapplicable": v.inapplicable.iter().map(|(d, why)| json!({"degree": d, "reason": why})).collect::<Vec<_>>(),
            "violations": v.violation_count,
            "symbol_values": v.symbol_values.iter().map(|&i| f.fmt_elem(f.elem(i).expect("element"))).collect::<Vec<_>>(),
        })
    });
    let hits: Vec<Value> = report
        .gaps
        .hits
        .iter()
        .map(|hit| json!({ "f": poly(f, &hit.f), "members": hit.members }))
        .collect();
    let v = json!({
        "sieve": sieve_json(&report.sieve),
        "alpha_verification": verification,
        "gap_report": {
            "degree": cfg.ell,
            "primes": report.gaps.primes.len(),
            "max_gap": report.gaps.max_gap().map(|x| x.norm.to_string()),
            "hit_threshold": cfg.hit_threshold(),
            "hits": hits,
        },
    });
    Ok(Output {
        text: String::new(),
        json: v,
        config: Some(cfg),
        embed_manifest: true,
    })
}

fn genus_cmd(cmd: &GenusCmd) -> Res<Output> {
    let v = match cmd {
        GenusCmd::Kummer { q, a, r } => {
            let f = ctx(*q)?;
            genus(&geometry::kummer_genus(&parse(&f, a)?, *r, &f)?)
        }
        GenusCmd::Cyclotomic { q, m } => {
            let f = ctx(*q)?;
            genus(&geometry::cyclotomic_genus(&parse(&f, m)?, &f)?)
        }
        GenusCmd::Castelnuovo { n1, g1, n2, g2 } => {
            let b = geometry::castelnuovo_bound(*n1, *g1, *n2, *g2)?;
            json!({ "genus": b, "exact": false, "source": "castelnuovo" })
        }
        GenusCmd::Compositum { q, g, r, m } => {
            let f = ctx(*q)?;
            genus(&geometry::compositum_genus_bound(
                &parse(&f, g)?,
                *r,
                &parse(&f, m)?,
                &f,
            )?)
        }
    };
    Ok(Output::new(v.clone(), tsv_object(&v)))
}

fn density(args: &DensityArgs, budget: Budget) -> Res<Output> {
    let f = ctx(args.q)?;
    let g = parse(&f, &args.g)?;
    let m = parse(&f, &args.m)?;
    let alpha = parse(&f, &args.alpha)?;
    let diag = geometry::r_sum_diagnostic(args.l, &f)?;
    let rs = match args.r {
        Some(r) => vec![r],
        None => diag.primes.clone(),
    };
    let mut rows = Vec::new();
    let mut text = String::from("r\tobserved\tpredicted\tpredicted_approx\tdeviation/q^(l/2)\n");
    for r in rs {
        let d = geometry::density_check(&g, r, &m, &alpha, args.l, &f, budget)?;
        let approx = d.predicted.to_f64().unwrap_or(f64::NAN);
        text.push_str(&format!(
            "{r}\t{}\t{}\t{approx:.4}\t{:.4}\n",
            d.observed,
            d.predicted,
            d.normalized_deviation()
        ));
        rows.push(json!({
            "r": r,
            "class_primes": d.class_primes,
            "observed": d.observed,
            "predicted": rat(&d.predicted),
            "normalized_deviation": d.normalized_deviation(),
        }));
    }
    let v = json!({
        "q": f.q(),
        "l": args.l,
        "g": poly(&f, &g),
        "M": poly(&f, &m),
        "alpha": poly(&f, &alpha),
        "rows": rows,
        "r_sum": {
            "primes": diag.primes,
            "sum": rat(&diag.sum),
            "bound": rat(&diag.bound),
        },
    });
    Ok(Output::new(v, text))
}

fn example5(q: u64, g: &str, budget: Budget) -> Res<Output> {
    let f = ctx(q)?;
    let e = experiments::example5(&parse(&f, g)?, &f, budget)?;
    if !e.bound_holds() {
        return Err(Error::Mismatch(format!(
            "max gap {} exceeds the bound {}",
            e.max_gap, e.bound
        ))
        .into());
    }
    let (first, _) = e.counts[0];
    let (last, _) = e.counts[e.counts.len() - 1];
    let mut text = String::from("degree\tprimes\n");
    for (d, c) in &e.counts {
        text.push_str(&format!("{d}\t{c}\n"));
    }
    let (lo, hi) = e.degree_range;
    text.push_str(&format!(
        "count({first}..{}) = {}; tuple size {}; bound {}\n",
        last - 1,
        e.below_last,
        e.tuple.k(),
        e.bound
    ));
    text.push_str(&format!("degrees after multiplying by g\t{lo}..{hi}\n"));
    text.push_str(&format!("max pairwise norm difference\t{}\n", e.max_gap));
    text.push_str(&format!("bound q^(deg g + 10)\t{}\n", e.bound));
    let v = json!({
        "q": e.q,
        "g": poly(&f, &e.g),
        "counts": e.counts.iter().map(|(d, c)| json!({"degree": d, "primes": c})).collect::<Vec<_>>(),
        "below_last": e.below_last,
        "tuple": tuple_json(&f, &e.tuple),
        "max_gap": e.max_gap.to_string(),
        "bound": e.bound.to_string(),
        "bound_holds": e.bound_holds(),
    });
    Ok(Output::new(v, text))
}
