use std::collections::BTreeSet;

use epl_poisson::dist::{poisson_pmf, PoissonParam};
use epl_poisson::metrics::{champion_prob, forty_point_rule, relegation_prob, top_k_prob};
use epl_poisson::regression::{RateTable, TeamRates};
use epl_poisson::simulate::{
    compute_table, run_ensemble, run_ensemble_with, season_rng, simulate_match,
    write_season_tables, EnsembleOptions, Fixture, League,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rates() -> RateTable {
    RateTable::from_rates((0..20).map(|i| {
        let s = 0.6 - 0.06 * f64::from(i);
        (
            format!("Team {i:02}"),
            TeamRates {
                lambda_home: 1.5 * s.exp(),
                lambda_away: 1.15 * s.exp(),
            },
        )
    }))
    .unwrap()
}

#[test]
fn match_replays_match_the_poisson_model() {
    let table = rates();
    let fx = Fixture {
        home: "Team 03".into(),
        away: "Team 11".into(),
    };
    let (lh, la) = (
        table.get("Team 03").unwrap().lambda_home,
        table.get("Team 11").unwrap().lambda_away,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 100_000;
    let (mut goals, mut wins) = (0u64, 0u64);
    for _ in 0..n {
        let r = simulate_match(&fx, &table, &mut rng).unwrap();
        goals += u64::from(r.home_goals);
        wins += u64::from(r.home_goals > r.away_goals);
    }
    // P(home win) = sum over h > a of pmf(h) pmf(a)
    let (ph, pa) = (
        PoissonParam::new(lh).unwrap(),
        PoissonParam::new(la).unwrap(),
    );
    let oracle: f64 = (1..40u32)
        .map(|h| poisson_pmf(h, ph) * (0..h).map(|a| poisson_pmf(a, pa)).sum::<f64>())
        .sum();
    assert!((goals as f64 / n as f64 - lh).abs() < 0.02);
    assert!((wins as f64 / n as f64 - oracle).abs() < 0.01);
}

#[test]
fn every_season_satisfies_the_table_identities() {
    let league = League::new(&rates()).unwrap();
    for k in 0..300 {
        let results = league.play(&mut season_rng(9, k));
        assert_eq!(results.len(), 380);
        let draws = results
            .iter()
            .filter(|r| r.home_goals == r.away_goals)
            .count() as u32;
        let table = compute_table(&results).unwrap();
        let points: u32 = table.iter().map(|r| r.points).sum();
        assert_eq!(points, 2 * draws + 3 * (380 - draws));
        assert!((760..=1140).contains(&points));
        assert_eq!(table.iter().map(|r| r.gd).sum::<i32>(), 0);
        let scored: u32 = results.iter().map(|r| r.home_goals + r.away_goals).sum();
        assert_eq!(table.iter().map(|r| r.gf).sum::<u32>(), scored);
        let ranks: BTreeSet<usize> = table.iter().map(|r| r.rank).collect();
        assert_eq!(ranks, (1..=20).collect());
        assert!(table.iter().all(|r| r.played == 38));
        for pair in table.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(
                (a.points, a.gd, a.gf, std::cmp::Reverse(&a.team))
                    > (b.points, b.gd, b.gf, std::cmp::Reverse(&b.team))
            );
        }
    }
}

#[test]
fn ensemble_invariants() {
    let s = run_ensemble(&rates(), 2000, 3).unwrap();
    let total = |v: Vec<(String, f64)>| v.iter().map(|x| x.1).sum::<f64>();
    assert!((total(champion_prob(&s)) - 100.0).abs() < 1e-9);
    assert!((total(relegation_prob(&s)) - 300.0).abs() < 1e-9);
    assert!((total(top_k_prob(&s, 4).unwrap()) - 400.0).abs() < 1e-9);
    for k in 1..20 {
        let (a, b) = (top_k_prob(&s, k).unwrap(), top_k_prob(&s, k + 1).unwrap());
        assert!(a.iter().zip(&b).all(|(x, y)| x.1 <= y.1));
    }
    assert!(top_k_prob(&s, 20).unwrap().iter().all(|x| x.1 == 100.0));
    for (i, (_, p)) in champion_prob(&s).iter().enumerate() {
        assert_eq!(*p > 0.0, s.rank_counts[i][0] > 0);
    }
    for season in &s.seasons {
        assert_eq!(season.gd_sum, 0);
        assert!((760..=1140).contains(&season.total_points));
        assert_eq!(season.relegated.len(), 3);
    }
    let forty = forty_point_rule(&s);
    assert!(forty.teams_violating >= forty.seasons_violating);
    assert!(forty.teams_violating <= 3 * forty.seasons_violating);
}

#[test]
fn ensemble_is_independent_of_thread_count() {
    let r = rates();
    let base = run_ensemble_with(&r, 500, 77, EnsembleOptions { threads: Some(1) }).unwrap();
    for threads in [Some(2), Some(5), None] {
        let other = run_ensemble_with(&r, 500, 77, EnsembleOptions { threads }).unwrap();
        assert_eq!(other, base);
        assert_eq!(other.to_json().unwrap(), base.to_json().unwrap());
    }
    assert_ne!(run_ensemble(&r, 500, 78).unwrap(), base);
}

#[test]
fn audit_tables_replay_the_ensemble() {
    let r = rates();
    let s = run_ensemble(&r, 40, 12).unwrap();
    let mut buf = Vec::new();
    write_season_tables(&r, 40, 12, &mut buf).unwrap();
    let mut reader = csv::Reader::from_reader(&buf[..]);
    let mut counts = vec![vec![0u64; 20]; 20];
    for row in reader.records() {
        let row = row.unwrap();
        let rank: usize = row[1].parse().unwrap();
        counts[s.team_index(&row[2]).unwrap()][rank - 1] += 1;
    }
    assert_eq!(counts, s.rank_counts);
}

#[test]
fn single_simulation_is_degenerate_but_valid() {
    let s = run_ensemble(&rates(), 1, 0).unwrap();
    let champ = champion_prob(&s);
    assert_eq!(champ.iter().filter(|x| x.1 == 100.0).count(), 1);
    assert_eq!(champ.iter().filter(|x| x.1 == 0.0).count(), 19);
    assert_eq!(
        relegation_prob(&s).iter().filter(|x| x.1 == 100.0).count(),
        3
    );
    assert!(run_ensemble(&rates(), 0, 0).is_err());
}
