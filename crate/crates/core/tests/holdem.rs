use house_edge::cards::parse_cards;
use house_edge::holdem::{matchup_class_count, Ranking, HoleHandClass, simulate_vs_random};
use house_edge::Rational;

#[test]
fn heads_up_pairs() {
    let r = Ranking::compute();
    let table = [
        ("AA", 1, "0.704074"),
        ("KK", 2, "0.647914"),
        ("QQ", 3, "0.598503"),
        ("JJ", 4, "0.549389"),
        ("TT", 5, "0.500236"),
        ("99", 6, "0.441145"),
        ("88", 7, "0.383261"),
        ("77", 9, "0.324720"),
        ("66", 17, "0.265695"),
        ("55", 27, "0.206498"),
        ("44", 48, "0.140456"),
        ("33", 66, "0.073862"),
        ("22", 87, "0.006680"),
    ];
    for (name, rank, value) in table {
        let c: HoleHandClass = name.parse().unwrap();
        assert_eq!(r.rank_of(c), Some(rank), "{name}");
        assert_eq!(r.value(c).unwrap().to_decimal(6), value, "{name}");
    }
    let ensemble: Rational = r
        .entries
        .iter()
        .map(|(c, v)| Rational::from(c.size()) * v)
        .sum();
    assert!(ensemble.is_zero());
    // The exact value sits within Monte Carlo error of a seeded simulation.
    let aa = parse_cards("As Ah").unwrap();
    let mc = simulate_vs_random(&aa, 1, 300_000, 9).unwrap();
    let exact = r.value("AA".parse().unwrap()).unwrap().to_f64();
    assert!((mc - exact).abs() < 0.01, "{mc} vs {exact}");
}

#[test]
fn matchup_classes() {
    assert_eq!(matchup_class_count(), 47_008);
}
