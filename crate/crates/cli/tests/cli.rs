use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gds-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gsd_of_three_projective_planes() {
    let o = lab(&["gsd", "--manifold", "tP:3", "--model", "gds"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4\n");
    let o = lab(&["gsd", "--manifold", "tP:3", "--model", "gtc"]);
    assert_eq!(stdout(&o), "8\n");
}

#[test]
fn table_csv_rows() {
    let o = lab(&["table-thm-a", "--tmax", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,dim_ds,dim_tc,ratio");
    assert_eq!(&lines[1..], ["1,1,2,0.5", "2,2,4,0.5", "3,4,8,0.5", "4,8,16,0.5"]);
}

#[test]
fn commutation_suite_on_voronoi() {
    let o =
        lab(&["verify", "--suite", "commutation", "--manifold", "torus-voronoi:2", "--points", "25", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["gsd", "--manifold", "moebius:2"]).status.code(), Some(2));
    assert_eq!(lab(&["gsd"]).status.code(), Some(2));
    assert_eq!(lab(&["verify", "--suite", "nonsense", "--manifold", "sphere:2"]).status.code(), Some(2));
    assert_eq!(lab(&["ed", "--manifold", "torus:3"]).status.code(), Some(2));
}

#[test]
fn failed_invariant_exits_one() {
    let o = lab(&["validate", "--manifold", "square-torus:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("4 cofaces"));
}

#[test]
fn generated_file_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.cx");
    let p = path.to_str().unwrap();
    let o = lab(&["gen", "--manifold", "torus-voronoi:2", "--points", "8", "--seed", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let from_file = stdout(&lab(&["homology", "--manifold", p]));
    let direct = stdout(&lab(&["homology", "--manifold", "torus-voronoi:2:8:3"]));
    assert_eq!(from_file, direct);
    assert!(from_file.contains("euler characteristic 0"));
    assert_eq!(lab(&["validate", "--manifold", p]).status.code(), Some(0));
}

#[test]
fn output_independent_of_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gds-lab"))
            .args([
                "gsd",
                "--sectors",
                "--manifold",
                "torus-voronoi:3",
                "--points",
                "20",
                "--seed",
                "1",
                "--format",
                "csv",
            ])
            .env("GDS_LAB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn surface_fixture_sign() {
    let o = lab(&["balloon"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("sign") && l.ends_with("+1")));
}

#[test]
fn circuit_and_ed_reports() {
    let o = lab(&["circuit", "--manifold", "sphere:3", "--format", "csv"]);
    assert!(stdout(&o).contains("depth,12"));
    let o = lab(&["ed", "--manifold", "tP:1", "--model", "gds", "--variant", "plain"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ed degeneracy     1"));
}
