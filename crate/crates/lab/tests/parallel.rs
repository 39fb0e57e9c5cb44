use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use lrs_core::factor::{FactorBudget, Factorizer};
use lrs_core::inequality::{self, ClassifyOptions, Kind};
use lrs_core::recurrence::RecurrenceSpec;
use lrs_core::sieve::{self, SieveConfig};
use lrs_lab::{parallel, specfile};

fn cfg(segment: u64) -> SieveConfig {
    SieveConfig { segment, ..SieveConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parallel_sieve_matches_serial(lo in 1u64..50_000, len in 1u64..20_000, seg in 64u64..4096, threads in 1usize..5) {
        let a = parallel::sieve_range(lo, lo + len, &cfg(seg), threads).unwrap();
        let b = sieve::sieve_range(lo, lo + len).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn parallel_counts_match_serial(x in 10u64..30_000, y in 1u64..50, seg in 64u64..4096, threads in 1usize..5) {
        prop_assume!(y <= x);
        let c = cfg(seg);
        prop_assert_eq!(
            parallel::count_rough(x, y, &c, threads).unwrap(),
            sieve::count_rough(x, y).unwrap()
        );
        prop_assert_eq!(
            parallel::count_high_omega(x, &c, threads).unwrap(),
            sieve::count_high_omega(x).unwrap()
        );
        let alpha = BigRational::new(BigInt::from(y), BigInt::from(50));
        prop_assert_eq!(
            parallel::schoenberg_cdf(x, &alpha, &c, threads).unwrap(),
            sieve::schoenberg_cdf(x, &alpha).unwrap()
        );
        prop_assert_eq!(
            parallel::extremal_scan(x, &c, threads).unwrap(),
            sieve::extremal_scan(x).unwrap()
        );
    }

    #[test]
    fn spec_files_round_trip(
        coeffs in prop::collection::vec(-1000i64..1000, 1..5),
        seed in any::<i64>(),
    ) {
        let mut coeffs = coeffs;
        if *coeffs.last().unwrap() == 0 {
            *coeffs.last_mut().unwrap() = 7;
        }
        let initial: Vec<i64> = (0..coeffs.len() as i64).map(|i| seed.wrapping_mul(i + 1)).collect();
        let spec = RecurrenceSpec::from_i64(&coeffs, &initial, "rt").unwrap();
        let back = specfile::parse_spec(&specfile::spec_to_toml(&spec)).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn parallel_census_matches_serial() {
    let spec = RecurrenceSpec::from_i64(&[1, -2], &[1, 1], "x2-x+2").unwrap();
    let fz = Factorizer::new(FactorBudget::default());
    let opts = ClassifyOptions::default();
    for kind in [Kind::Phi, Kind::Sigma] {
        let a = parallel::census(&spec, 300, kind, &fz, &opts, 3).unwrap();
        let b = inequality::census(&spec, 300, kind, &fz, &opts).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.exceptional_indices, b.exceptional_indices);
    }
}
