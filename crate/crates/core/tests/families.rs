use std::time::Instant;

use etale::families::{self, dim_identities, stabilizer_chain_report, Identity};
use etale::rep::Verdict;

/// Chain-module dimension straight from the definition.
fn chain_dim(m: usize) -> usize {
    (1..m).map(|k| (k + 1) * k).sum()
}

fn sp_dim(n: usize) -> usize {
    n * (2 * n + 1)
}

#[test]
fn sp_chain_is_etale_up_to_four() {
    let start = Instant::now();
    for n in 1..=4 {
        let f = families::sp_chain(n).unwrap();
        let gl_dims: usize = (1..2 * n).map(|k| k * k).sum();
        assert_eq!(f.dims(), (sp_dim(n) + gl_dims, 2 * n + chain_dim(2 * n)));
        assert_eq!(f.report.verdict, Verdict::Etale, "n = {n}");
        assert_eq!(f.report.stabilizer_dim, 0);
        assert_eq!(f.report.point_source, "canonical");
    }
    eprintln!("sp-chain 1..4: {:?}", start.elapsed());
}

#[test]
fn sp_chain_sizes() {
    let sizes: Vec<usize> = (1..=4).map(|n| 2 * n + chain_dim(2 * n)).collect();
    assert_eq!(sizes, vec![4, 24, 76, 176]);
}

#[test]
fn so_chain_is_etale_up_to_six() {
    let start = Instant::now();
    for n in 2..=6 {
        let f = families::so_chain(n).unwrap();
        assert_eq!(f.dims(), (chain_dim(n), chain_dim(n)));
        assert_eq!(f.report.verdict, Verdict::Etale, "n = {n}");
        assert_eq!(f.report.stabilizer_dim, 0);
    }
    eprintln!("so-chain 2..6: {:?}", start.elapsed());
}

#[test]
fn sp_chain_stabilizer_chain() {
    for (n, first) in [(2, 3), (3, 10)] {
        let report = stabilizer_chain_report(&families::sp_chain(n).unwrap()).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.levels[0].kernel_dim, first);
        assert_eq!(report.levels[0].pattern_ok, Some(true));
        assert_eq!(report.levels.last().unwrap().kernel_dim, 0);
        assert!(report.failure().is_none());
    }
}

#[test]
fn so_chain_stabilizer_chain() {
    for n in 2..=5 {
        let report = stabilizer_chain_report(&families::so_chain(n).unwrap()).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.levels[0].kernel_dim, (n - 1) * (n - 2) / 2);
        assert_eq!(report.levels.last().unwrap().kernel_dim, 0);
    }
}

#[test]
fn reduction_agrees_with_determinant() {
    for f in [families::sp_chain(2).unwrap(), families::so_chain(4).unwrap()] {
        let direct = f.representation.is_etale_at(&f.canonical_point).unwrap();
        let reduced = f.representation.etale_by_reduction(&f.canonical_point).unwrap();
        assert_eq!(direct.verdict == Verdict::Etale, reduced.etale);
        assert!(reduced.etale);
    }
}

#[test]
fn identities_hold_on_acceptance_ranges() {
    let rows = dim_identities(10);
    let in_range = |r: &&etale::families::IdentityRow| match r.identity {
        Identity::ChainModule => (2..=10).contains(&r.parameter),
        Identity::SpChain => (1..=6).contains(&r.parameter),
        Identity::SoChain => (2..=8).contains(&r.parameter),
    };
    let selected: Vec<_> = rows.iter().filter(in_range).collect();
    assert_eq!(selected.len(), 9 + 6 + 7);
    for r in selected {
        assert!(r.holds, "{r:?}");
        let independent = match r.identity {
            Identity::ChainModule => chain_dim(r.parameter),
            Identity::SpChain => 2 * r.parameter + chain_dim(2 * r.parameter),
            Identity::SoChain => chain_dim(r.parameter),
        };
        assert_eq!(r.rhs as usize, independent);
    }
}

#[test]
fn sp_e_only_small_family() {
    for n in 1..=2 {
        let f = families::sp_e_only(n).unwrap();
        assert_eq!(f.dims().0, f.dims().1);
        assert_eq!(f.report.verdict, Verdict::Etale);
        assert!(stabilizer_chain_report(&f).unwrap().passed);
    }
}
