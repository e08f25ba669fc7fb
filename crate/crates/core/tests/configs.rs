use std::path::Path;

use nsprox::io::{load_config, load_field_spec};

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

#[test]
fn shipped_configurations_load() {
    let tg = load_config(&configs().join("taylor_green.cfg")).unwrap();
    assert_eq!(tg.grid().unwrap().n(), 32);
    assert_eq!(tg.plan().step_count(), 250);
    assert_eq!(tg.criteria.len(), 2);

    let rb = load_config(&configs().join("random_band.cfg")).unwrap();
    assert_eq!(rb.initial_data.band, [2.0, 6.0]);
    assert_eq!(rb.criteria.len(), 3);

    let abc = load_field_spec(&configs().join("abc.spec")).unwrap();
    assert_eq!(abc.n, 16);
}
