//! End-to-end runs: the explicit 105-tuple over `F_2`, and the full sieve
//! pipeline driven by a flat `key = value` configuration.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{enumerate_irreducibles, integer::is_prime_u64, DEFAULT_SEED};
use crate::ffcore::{big_pow, FieldCtx, Poly};
use crate::primroots::{gap_report, is_eligible, GapReport};
use crate::sieve::{
    build_admissible_tuple, compute_w, compute_w_override, find_alpha, lambda_weights,
    parse_rational, sieve_sums, verify_alpha, AlphaMode, AlphaVerification, MainTerms, MultiPoly,
    SieveConfig, SieveSums, TupleH, VerifySpec,
};

/// Size of the explicit tuple.
pub const EXAMPLE_K: usize = 105;

#[derive(Debug, Clone)]
pub struct Example5 {
    pub q: u32,
    pub g: Poly,
    /// `(degree, number of primes of that degree)` for every degree the
    /// tuple draws from, starting at the first with `q^d > k`.
    pub counts: Vec<(usize, usize)>,
    /// Primes in all but the last of those degrees.
    pub below_last: usize,
    /// `g` times the first `k` primes of norm exceeding `k`.
    pub tuple: TupleH,
    pub degree_range: (i64, i64),
    pub max_gap: BigUint,
    /// `q^(deg g + 10)`.
    pub bound: BigUint,
}

impl Example5 {
    pub fn bound_holds(&self) -> bool {
        self.max_gap <= self.bound
    }
}

pub fn example5(g: &Poly, ctx: &FieldCtx, budget: Budget) -> Result<Example5> {
    let (_, g) = g.monic(ctx)?;
    let tuple = build_admissible_tuple(EXAMPLE_K, ctx, &g, budget)?;
    let dg = g.degree().unwrap();
    let top = tuple.degree_range().1 as usize - dg;
    let mut first = 1;
    while big_pow(ctx.q(), first) <= BigUint::from(EXAMPLE_K) {
        first += 1;
    }
    let counts = (first..=top)
        .map(|d| Ok((d, enumerate_irreducibles(d, ctx, budget)?.len())))
        .collect::<Result<Vec<_>>>()?;
    let below_last = counts[..counts.len() - 1].iter().map(|c| c.1).sum();
    Ok(Example5 {
        q: ctx.q(),
        degree_range: tuple.degree_range(),
        max_gap: tuple.max_gap_norm(ctx),
        bound: big_pow(ctx.q(), dg + 10),
        g,
        counts,
        below_last,
        tuple,
    })
}

/// Parameters of a sieve run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub q: u64,
    pub k: usize,
    pub ell: usize,
    pub theta: BigRational,
    pub g: String,
    /// Tuple elements; built automatically when absent.
    pub tuple: Option<Vec<String>>,
    /// The cutoff `F`; `1 - x1 - ... - xk` when absent.
    pub f: Option<String>,
    /// Replaces the default `W` by `lcm(g, w_override)`.
    pub w_override: Option<String>,
    /// Minimum number of shifts in `P_g` for a tuple hit.
    pub m: Option<usize>,
    pub alpha_mode: AlphaMode,
    pub seed: u64,
    pub verify: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            q: 2,
            k: 1,
            ell: 5,
            theta: BigRational::new(1.into(), 5.into()),
            g: "t".into(),
            tuple: None,
            f: None,
            w_override: None,
            m: None,
            alpha_mode: AlphaMode::Symbol,
            seed: DEFAULT_SEED,
            verify: true,
        }
    }
}

impl PipelineConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys are
    /// rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (key, value) in parse_kv(text)? {
            let int = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("{key}: not an integer: {v:?}")))
            };
            match key.as_str() {
                "q" => cfg.q = int(&value)?,
                "k" => cfg.k = int(&value)? as usize,
                "l" | "ell" => cfg.ell = int(&value)? as usize,
                "theta" => cfg.theta = parse_rational(&value)?,
                "g" => cfg.g = value,
                "tuple" => {
                    cfg.tuple = Some(value.split(',').map(|s| s.trim().to_string()).collect())
                }
                "F" | "f" => cfg.f = Some(value),
                "w_override" => cfg.w_override = Some(value),
                "m" => cfg.m = Some(int(&value)? as usize),
                "alpha_mode" => {
                    cfg.alpha_mode = match value.as_str() {
                        "symbol" => AlphaMode::Symbol,
                        "coprime" => AlphaMode::CoprimeOnly,
                        _ => return Err(Error::Parse(format!("alpha_mode: {value:?}"))),
                    }
                }
                "seed" => cfg.seed = int(&value)?,
                "verify" => {
                    cfg.verify = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("verify: {value:?}")))?
                }
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            }
        }
        Ok(cfg)
    }

    /// The configuration as ordered `key = value` pairs.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        out.insert("q".into(), self.q.to_string());
        out.insert("k".into(), self.k.to_string());
        out.insert("l".into(), self.ell.to_string());
        out.insert("theta".into(), self.theta.to_string());
        out.insert("g".into(), self.g.clone());
        if let Some(t) = &self.tuple {
            out.insert("tuple".into(), t.join(", "));
        }
        if let Some(f) = &self.f {
            out.insert("F".into(), f.clone());
        }
        if let Some(w) = &self.w_override {
            out.insert("w_override".into(), w.clone());
        }
        out.insert("m".into(), self.hit_threshold().to_string());
        let mode = match self.alpha_mode {
            AlphaMode::Symbol => "symbol",
            AlphaMode::CoprimeOnly => "coprime",
        };
        out.insert("alpha_mode".into(), mode.into());
        out.insert("seed".into(), self.seed.to_string());
        out.insert("verify".into(), self.verify.to_string());
        out
    }

    pub fn hit_threshold(&self) -> usize {
        self.m.unwrap_or(self.k.min(2))
    }
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Everything a sieve run needs, resolved from a [`PipelineConfig`].
#[derive(Debug, Clone)]
pub struct SieveSetup {
    pub ctx: FieldCtx,
    pub g: Poly,
    pub tuple: TupleH,
    pub config: SieveConfig,
}

pub fn prepare(cfg: &PipelineConfig, budget: Budget) -> Result<SieveSetup> {
    if !is_prime_u64(cfg.ell as u64) {
        return Err(Error::invalid(format!(
            "l = {} must be prime: the sieve runs over prime degrees only",
            cfg.ell
        )));
    }
    let ctx = FieldCtx::new(cfg.q)?;
    let g = ctx.parse_poly(&cfg.g)?;
    if !g.is_monic() {
        return Err(Error::NotMonic(cfg.g.clone()));
    }
    if !is_eligible(&g, &ctx)? {
        return Err(Error::invalid(format!(
            "g = {} is a v-th power for some prime v | q - 1",
            cfg.g
        )));
    }
    let tuple = match &cfg.tuple {
        Some(items) => {
            let elements = items
                .iter()
                .map(|s| ctx.parse_poly(s))
                .collect::<Result<Vec<_>>>()?;
            if elements.len() != cfg.k {
                return Err(Error::invalid(format!(
                    "tuple has {} elements but k = {}",
                    elements.len(),
                    cfg.k
                )));
            }
            TupleH::new(elements, &g, &ctx, budget)?
        }
        None => build_admissible_tuple(cfg.k, &ctx, &g, budget)?,
    };
    let w = match &cfg.w_override {
        Some(s) => compute_w_override(&g, &ctx.parse_poly(s)?, &ctx)?,
        None => compute_w(cfg.ell, &g, &ctx, budget)?,
    };
    let alpha = find_alpha(&g, &tuple, &w, &ctx, cfg.alpha_mode)?;
    let f = match &cfg.f {
        Some(s) => MultiPoly::parse(cfg.k, s)?,
        None => MultiPoly::one_minus_sum(cfg.k),
    };
    let config = SieveConfig::new(cfg.k, cfg.ell, cfg.theta.clone(), w, alpha, f)?;
    Ok(SieveSetup {
        ctx,
        g,
        tuple,
        config,
    })
}

#[derive(Debug, Clone)]
pub struct SieveRun {
    pub setup: SieveSetup,
    pub weight_count: usize,
    pub lambda_one: BigRational,
    pub sums: SieveSums,
    pub main: MainTerms,
}

pub fn run_sieve(cfg: &PipelineConfig, budget: Budget) -> Result<SieveRun> {
    let setup = prepare(cfg, budget)?;
    let ctx = &setup.ctx;
    let table = lambda_weights(&setup.config, ctx, budget)?;
    let sums = sieve_sums(&setup.config, &table, &setup.tuple, &setup.g, ctx, budget)?;
    let main = MainTerms::new(&setup.config, ctx)?;
    Ok(SieveRun {
        weight_count: table.len(),
        lambda_one: table.lambda_one(),
        sums,
        main,
        setup,
    })
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub sieve: SieveRun,
    pub verification: Option<AlphaVerification>,
    /// `P_g` in degree `l` with its gaps and the shifts hitting the tuple.
    pub gaps: GapReport,
}

pub fn pipeline(cfg: &PipelineConfig, budget: Budget) -> Result<PipelineReport> {
    let sieve = run_sieve(cfg, budget)?;
    let SieveSetup {
        ctx,
        g,
        tuple,
        config,
    } = &sieve.setup;
    let verification = if cfg.verify {
        let spec = VerifySpec {
            seed: cfg.seed,
            budget,
            check_symbol: cfg.alpha_mode == AlphaMode::Symbol,
            ..VerifySpec::exhaustive(vec![cfg.ell])
        };
        Some(verify_alpha(&config.alpha, &config.w, tuple, g, ctx, &spec)?)
    } else {
        None
    };
    let gaps = gap_report(
        g,
        (cfg.ell, cfg.ell),
        Some((tuple.elements(), cfg.hit_threshold())),
        ctx,
        budget,
    )?;
    Ok(PipelineReport {
        sieve,
        verification,
        gaps,
    })
}
