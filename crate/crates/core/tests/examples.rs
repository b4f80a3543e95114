mod khovanov_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/khovanov_table.rs"));
}

#[test]
fn khovanov_table_runs() {
    khovanov_table::run_example().expect("khovanov_table example should run");
}

mod lee_s_invariant {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lee_s_invariant.rs"));
}

#[test]
fn lee_s_invariant_runs() {
    lee_s_invariant::run_example().expect("lee_s_invariant example should run");
}

mod movie_maps {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/movie_maps.rs"));
}

#[test]
fn movie_maps_runs() {
    movie_maps::run_example().expect("movie_maps example should run");
}

mod collapse_patterns {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/collapse_patterns.rs"));
}

#[test]
fn collapse_patterns_runs() {
    collapse_patterns::run_example().expect("collapse_patterns example should run");
}

mod squeeze {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/squeeze.rs"));
}

#[test]
fn squeeze_runs() {
    squeeze::run_example().expect("squeeze example should run");
}

mod obstruction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/obstruction.rs"));
}

#[test]
fn obstruction_runs() {
    obstruction::run_example().expect("obstruction example should run");
}

mod t45_replay {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/t45_replay.rs"));
}

#[test]
fn t45_replay_runs() {
    t45_replay::run_example().expect("t45_replay example should run");
}
