use num_traits::{Signed, Zero};

use ffgaps::experiments::{pipeline, prepare, run_sieve, PipelineConfig};
use ffgaps::{Budget, Error};

#[test]
fn default_config_end_to_end() {
    let cfg = PipelineConfig::parse("q = 2\nk = 1\nl = 5\n").unwrap();
    let report = pipeline(&cfg, Budget::default()).unwrap();
    assert!(report.verification.as_ref().unwrap().passed());
    let sums = &report.sieve.sums;
    assert_eq!(sums.class_size, 16);
    assert!(sums.s1.is_positive());
    assert!(!sums.difference().is_negative());
    assert!(report.gaps.primes.iter().all(|p| p.degree() == Some(5)));
}

#[test]
fn runs_are_deterministic() {
    let text = "q = 3\nk = 2\nl = 7\ntheta = 1/5\ng = t\ntuple = t^2, t^3\n";
    let cfg = PipelineConfig::parse(text).unwrap();
    let a = run_sieve(&cfg, Budget::default()).unwrap();
    let b = run_sieve(&cfg, Budget::default()).unwrap();
    assert_eq!(a.sums.s1, b.sums.s1);
    assert_eq!(a.sums.s2, b.sums.s2);
    assert_eq!(a.lambda_one, b.lambda_one);
    assert!(!a.lambda_one.is_zero());
}

#[test]
fn invalid_configs_are_rejected() {
    for text in [
        "q = 2\nk = 1\nl = 6\n",
        "q = 2\nk = 1\nl = 5\ntheta = 1/4\n",
        "q = 6\nk = 1\nl = 5\n",
        "q = 2\nk = 2\nl = 5\ntuple = t, t+1\n",
    ] {
        let cfg = PipelineConfig::parse(text);
        let err = cfg.and_then(|c| prepare(&c, Budget::default()).map(|_| ()));
        assert!(err.is_err(), "{text}");
    }
    assert!(PipelineConfig::parse("q = 2\nfoo = 1\n").is_err());
}

#[test]
fn budget_is_enforced() {
    let cfg = PipelineConfig::parse("q = 2\nk = 1\nl = 11\n").unwrap();
    let err = run_sieve(&cfg, Budget::new(8)).err().unwrap();
    assert!(matches!(err, Error::BudgetExceeded { .. }), "{err}");
}
