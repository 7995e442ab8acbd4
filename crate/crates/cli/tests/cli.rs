use std::path::PathBuf;
use std::process::{Command, Output};

fn pvfilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvfilter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pvfilter-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn decompose_two_masses() {
    let o = pvfilter(&["decompose", "masses=[1, 10]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("K,M,c,eps,sigma\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 2);
    let c = 10.0 / 9.0;
    assert!((num(&r[0][2]) - c).abs() < 1e-15);
    assert!((num(&r[1][2]) + c).abs() < 1e-15);
    assert_eq!((r[0][3].as_str(), r[1][3].as_str()), ("+1", "-1"));
    for row in &r {
        assert!((num(&row[4]) - c.sqrt()).abs() < 1e-15);
    }
    assert!(text.contains("j,sum_rule_residual\n0,"));
}

#[test]
fn decompose_edge_cases() {
    let o = pvfilter(&["decompose", "masses=[1]"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert_eq!(num(&r[0][2]), 1.0);

    let o = pvfilter(&["decompose", "masses=[1,1]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate ladder"));
}

#[test]
fn prop_values() {
    let o = pvfilter(&["prop", "masses=[1,10]", "contour=FEYNMAN", "tau_steps=11"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 11);
    assert_eq!(r[0].iter().map(|x| num(x)).collect::<Vec<_>>(), [0.0, 0.0, 0.0]);

    let o = pvfilter(&["prop", "masses=[1]", "tau_min=2", "tau_max=2", "tau_steps=1"]);
    let r = rows(&stdout(&o));
    assert_eq!(num(&r[0][0]), 2.0);
    assert!((num(&r[0][1]) - 2f64.sin()).abs() < 1e-15);
    assert!((num(&r[0][2]) - 2f64.cos()).abs() < 1e-15);
}

#[test]
fn prop_rejects_bad_grids_and_keys() {
    for args in [
        &["prop", "tau_steps=0"][..],
        &["prop", "tau_min=3", "tau_max=1"],
        &["prop", "contour=sideways"],
        &["prop", "colour=red"],
        &["prop", "masses=[1,-2]"],
    ] {
        assert_eq!(pvfilter(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn prop_oracle() {
    for contour in ["FEYNMAN", "CLOSED", "PLUS", "MINUS"] {
        let o = pvfilter(&["prop", "--oracle", "masses=[1]", "tau_min=-2", "tau_max=2", "tau_steps=5"][..]
            .iter()
            .copied()
            .chain([format!("contour={contour}").as_str()])
            .collect::<Vec<_>>());
        assert_eq!(o.status.code(), Some(0), "{contour}: {}", stderr(&o));
    }
    let o = pvfilter(&["prop", "--oracle", "masses=[1,10]", "tau_min=-10", "tau_max=10", "tau_steps=3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = pvfilter(&["prop", "--oracle", "--tol", "1e-12", "tau_min=1", "tau_max=2", "tau_steps=2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("oracle mismatch"));
    assert_eq!(rows(&stdout(&o)).len(), 2);
}

#[test]
fn respond_matches_kubo() {
    let o = pvfilter(&["respond"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("tau,re_resp,im_resp,re_kubo,im_kubo,absdiff\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 200);
    assert!(r.iter().all(|row| num(&row[5]) <= 1e-8));
    assert!(r[0][1..].iter().all(|x| num(x) == 0.0));

    let o = pvfilter(&["respond", "tau_min=-3", "tau_max=-1", "tau_steps=3"]);
    assert!(rows(&stdout(&o)).iter().all(|row| row[1..].iter().all(|x| num(x) == 0.0)));

    let o = pvfilter(&["respond", "omega1=0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn born_partial_sums_converge() {
    let o = pvfilter(&["born", "v0=0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 7);
    let residuals: Vec<f64> = r.iter().map(|row| num(&row[5])).collect();
    assert!(residuals[6] < residuals[1] * 1e-3, "{residuals:?}");
    assert_eq!(pvfilter(&["born", "ode_step=0.5"]).status.code(), Some(2));
}

#[test]
fn count_tables() {
    let o = pvfilter(&["count"]);
    assert_eq!(o.status.code(), Some(0));
    let minimal: Vec<String> = rows(&stdout(&o)).iter().map(|r| r[4].clone()).collect();
    assert_eq!(minimal, ["4", "2", "2", "1"]);

    let o = pvfilter(&["count", "diagrams=custom:2,2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0][4], "2");
    assert_eq!(r[0][5], "2");
    assert_eq!(r[0][7], "-2");

    let o = pvfilter(&["count", "diagrams=ok:1,1,1;light:1,0,2"]);
    assert_eq!(o.status.code(), Some(2));
    let r = rows(&stdout(&o));
    assert_eq!(r[1][4], "error");
    assert!(stderr(&o).contains("no internal fermion lines"));

    let o = pvfilter(&["count", "diagrams=odd:1,1,3"]);
    assert!(stderr(&o).contains("warning"));
    assert_eq!(pvfilter(&["count", "diagrams=bad:1,1"]).status.code(), Some(2));
}

#[test]
fn verify_filtering_and_tolerance() {
    let o = pvfilter(&["verify", "--only", "reg_algebra"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() > 3);
    assert!(text.lines().all(|l| l.starts_with("reg_algebra.") && l.contains(", PASS, ")));

    let o = pvfilter(&["verify", "--only", "reg_algebra", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(", FAIL, "));

    assert_eq!(pvfilter(&["verify", "--only", "nothing"]).status.code(), Some(2));

    let o = pvfilter(&["dirac-verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("dirac_algebra.")));
}

#[test]
fn verify_exit_code_reflects_report() {
    let o = pvfilter(&["verify"]);
    let text = stdout(&o);
    for module in ["reg_algebra", "contour_propagators", "oscillator_filter", "dirac_algebra", "divergence_counter"] {
        assert!(text.contains(&format!("{module}.")), "{module}");
    }
    let failed = text.contains(", FAIL, ");
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
}

#[test]
fn config_file_and_output_path() {
    let config = scratch("run.cfg");
    std::fs::write(&config, "# two-mass ladder\nmasses = [1, 10]\ncontour = closed\ntau_steps = 4\n").unwrap();
    let out = scratch("prop.csv");
    let args = ["prop", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "tau_max=3"];
    let o = pvfilter(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&out).unwrap();
    let r = rows(std::str::from_utf8(&first).unwrap());
    assert_eq!(r.len(), 4);
    assert_eq!(num(&r[3][0]), 3.0);
    // CLOSED at tau = 0 is the sum of the coefficients.
    assert!(num(&r[0][1]).abs() < 1e-15);

    assert_eq!(pvfilter(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let missing = ["prop", "--config", "/nonexistent/pvfilter.cfg"];
    assert_eq!(pvfilter(&missing).status.code(), Some(2));
}
