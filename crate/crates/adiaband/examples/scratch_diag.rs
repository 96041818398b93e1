use adiaband::weyl::*;

fn main() {
    // The acceptance-grid Moyal sweep for the specified pairs plus the
    // genuinely third-order pair, to pin what the criterion can see.
    let g = PositionGrid::new(256, 40.0).unwrap();
    let pairs: Vec<(&str, Symbol, Symbol)> = vec![
        ("(q,p)", Symbol::coordinate(), Symbol::momentum()),
        ("(q^2,p^2)", Symbol::scalar(|q, _| q * q), Symbol::scalar(|_, p| p * p)),
        ("(sin q,p)", Symbol::scalar(|q, _| q.sin()), Symbol::momentum()),
        ("(q^3,p^3)", Symbol::scalar(|q, _| q * q * q), Symbol::scalar(|_, p| p * p * p)),
        ("(sin q,p^3)", Symbol::scalar(|q, _| q.sin()), Symbol::scalar(|_, p| p * p * p)),
    ];
    for (name, a, b) in pairs {
        print!("{name:12}");
        for &eps in &[0.1, 0.05, 0.025, 0.0125] {
            let d = moyal_defect(&a, &b, &g, eps).unwrap();
            print!("  {d:.3e}");
        }
        println!();
    }
}
