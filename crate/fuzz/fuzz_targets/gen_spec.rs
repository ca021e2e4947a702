#![no_main]

use libfuzzer_sys::fuzz_target;
use psa_cli::GenSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<GenSpec>() else { return };
    let again: GenSpec = spec.to_string().parse().expect("canonical form parses");
    assert_eq!(again, spec);
});
