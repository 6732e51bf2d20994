#![no_main]

use fracreg_core::pipeline::SeriesFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = SeriesFile::from_json(text) {
        let again = SeriesFile::from_json(&file.to_json()).expect("re-parse own output");
        assert_eq!(again, file);
    }
});
