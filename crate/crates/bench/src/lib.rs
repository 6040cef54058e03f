//! Instance sets shared by the criterion benches.

use hyperfix::encodings::{gen_async_od, gen_ck_chain, gen_mazurkiewicz, gen_muddy_children, Instance, Mazurkiewicz, OdProgram};
use hyperfix::engine::{CheckConfig, Method};

pub fn config(method: Method) -> CheckConfig {
    CheckConfig { max_precision: 30, method, ..Default::default() }
}

/// Common-knowledge instances for n = 1..=max.
pub fn knowledge(max: usize) -> Vec<Instance> {
    (1..=max).map(|n| gen_ck_chain(n).0).collect()
}

pub fn muddy(n: usize) -> Vec<Instance> {
    (1..=n).map(|m| gen_muddy_children(n, m)).collect()
}

pub fn flow() -> Vec<Instance> {
    [OdProgram::TSyn, OdProgram::TAsyn, OdProgram::Q1].into_iter().map(|p| gen_async_od(p).1).collect()
}

pub fn traces() -> Vec<(Instance, Method)> {
    vec![
        (gen_mazurkiewicz(Mazurkiewicz::SwapA), Method::LearnOnly),
        (gen_mazurkiewicz(Mazurkiewicz::SwapATwice), Method::LearnOnly),
        (gen_mazurkiewicz(Mazurkiewicz::SwapAN(5)), Method::IterOnly),
        (gen_mazurkiewicz(Mazurkiewicz::SwapAViolation(5)), Method::IterOnly),
    ]
}
