mod common;

use common::props::all_properties;
use common::table;

const GROUPS: &[&str] = &[
    "C6", "C2xC2", "S3", "D8", "Q8", "C3xC3", "A4", "D12", "F20", "F21", "SL(2,3)", "S4", "Heis3", "sd:C7:C3xC3:2;1", "A5",
];

#[test]
fn burnside_ring_properties() {
    for name in GROUPS {
        if let Err(e) = all_properties(name, &table(name)) {
            panic!("{e}");
        }
    }
}
