//! Fixture programs shared by the benchmarks.

/// The goldfish/piranha model.
pub const PIRANHA: &str =
    "P := bernoulli(1/2); if (P = 1) { R := 1 } else { R := bernoulli(1/2) }; observe(R = 1)";

/// Two geometric counters coupled through nested branches and observations.
pub const COUPLED_GEOMETRIC: &str = "X := geometric(1/2);
Y := geometric(1/3);
if (X <= 2) {
    Z := Y + 1;
    if (Y > 1) { observe(X != 0) } else { Z := bernoulli(1/4) }
} else {
    Z := X;
    observe(Z < 5)
};
Y := Y + 2";

/// A chain of `n` coin flips each conditioned on the previous one.
pub fn coin_chain(n: usize) -> String {
    let mut src = String::from("C0 := bernoulli(1/2)");
    for i in 1..n {
        src.push_str(&format!(
            ";\nif (C{prev} = 1) {{ C{i} := bernoulli(2/3) }} else {{ C{i} := bernoulli(1/3) }}",
            prev = i - 1
        ));
    }
    src.push_str(&format!(";\nobserve(C{} = 1)", n - 1));
    src
}
