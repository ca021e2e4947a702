#![no_main]

use libfuzzer_sys::fuzz_target;
use psa_cli::RunRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(record) = RunRecord::from_json(text) else { return };
    let json = record.to_json().expect("parsed record serializes");
    assert_eq!(RunRecord::from_json(&json).expect("emitted record parses"), record);
    let _ = record.csv_row();
});
