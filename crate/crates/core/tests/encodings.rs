use std::fs;

use hyperfix::encodings::*;
use hyperfix::formula::parse_formula;
use hyperfix::system::parse_system;

#[test]
fn written_instances_parse_back() {
    let dir = std::env::temp_dir().join(format!("hyperfix-enc-{}", std::process::id()));
    let (a, b) = gen_ck_chain(2);
    for i in [a, b, gen_muddy_children(2, 1), gen_mazurkiewicz(Mazurkiewicz::SwapATwice), gen_async_od(OdProgram::Q1).1] {
        let (sys, hf) = i.write_to(&dir).unwrap();
        let ts = parse_system(&fs::read_to_string(sys).unwrap()).unwrap();
        let f = parse_formula(&fs::read_to_string(hf).unwrap(), ts.aps()).unwrap();
        assert_eq!(ts.to_text(), i.system.to_text(), "{}", i.name);
        assert_eq!(f, i.formula, "{}", i.name);
    }
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn muddy_grows_with_children() {
    let sizes: Vec<usize> = (2..=4).map(|n| gen_muddy_children(n, 1).system.state_count()).collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
}

#[test]
fn swap_family_names_are_distinct() {
    let names: Vec<String> = [Mazurkiewicz::SwapA, Mazurkiewicz::SwapATwice, Mazurkiewicz::SwapAN(2), Mazurkiewicz::SwapAViolation(2)]
        .into_iter()
        .map(|v| gen_mazurkiewicz(v).name)
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), names.len());
}
