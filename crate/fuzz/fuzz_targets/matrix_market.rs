#![no_main]

use libfuzzer_sys::fuzz_target;
use psa_core::problems::{parse_matrix_market, write_matrix_market};

// Small cap so hostile size lines cannot allocate much.
const CAP: usize = 1 << 16;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(a) = parse_matrix_market(text, CAP) else { return };
    // anything accepted must survive a write/read cycle unchanged
    let again = parse_matrix_market(&write_matrix_market(&a), CAP).expect("written file parses");
    assert_eq!((a.nrows(), a.ncols()), (again.nrows(), again.ncols()));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            assert_eq!(a.get(i, j), again.get(i, j), "entry ({i}, {j})");
        }
    }
});
