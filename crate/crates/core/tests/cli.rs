mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data_path;
use serde_json::Value;

fn dynsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynsolve"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_config(dir: &Path, plugin: &str) -> std::path::PathBuf {
    let mut cfg: Value = serde_json::from_str(
        &std::fs::read_to_string(data_path("arm6_franka_friction_placeholder.json")).unwrap(),
    )
    .unwrap();
    cfg["plugin_name"] = plugin.into();
    cfg["robot_description_path"] = path_str(&data_path("arm6_tool.urdf")).into();
    let path = dir.join(format!("{plugin}.json"));
    std::fs::write(&path, cfg.to_string()).unwrap();
    path
}

#[test]
fn validate_reports_the_chain() {
    let urdf = data_path("arm6_tool.urdf");
    let out = dynsolve(&[
        "validate",
        "--urdf",
        path_str(&urdf),
        "--root",
        "base_link",
        "--tip",
        "tool0",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("6 dof"));
    assert!(stdout.contains("17.9939 kg"));
    assert!(!stdout.contains("error"));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.urdf");
    std::fs::write(&broken, "<robot name='x'><link name='a'></robot>").unwrap();
    assert_eq!(
        code(&dynsolve(&["validate", "--urdf", path_str(&broken)])),
        3
    );

    let cyclic = dir.path().join("two_roots.urdf");
    std::fs::write(
        &cyclic,
        "<robot name='x'><link name='a'/><link name='b'/></robot>",
    )
    .unwrap();
    assert_eq!(
        code(&dynsolve(&["validate", "--urdf", path_str(&cyclic)])),
        4
    );

    let urdf = data_path("pendulum.urdf");
    assert_eq!(
        code(&dynsolve(&[
            "validate",
            "--urdf",
            path_str(&urdf),
            "--root",
            "base_link",
            "--tip",
            "nope"
        ])),
        4
    );
    assert_eq!(code(&dynsolve(&["validate"])), 2);
    assert_eq!(
        code(&dynsolve(&[
            "validate",
            "--urdf",
            path_str(&urdf),
            "--root",
            "base_link"
        ])),
        2
    );
    assert_eq!(code(&dynsolve(&["no-such-command"])), 2);
}

#[test]
fn components_prints_json() {
    let cfg = data_path("arm6_ur10_current_placeholder.json");
    let out = dynsolve(&[
        "components",
        "--config",
        path_str(&cfg),
        "--q",
        "0,-1.2,1,0,0.5,0",
        "--qd",
        "0.1,0,0,0,0,-0.3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["dof"], 6);
    assert_eq!(value["inertia"].as_array().unwrap().len(), 6);
    assert_eq!(value["currents"].as_array().unwrap().len(), 6);
    assert_eq!(
        value["qdd"],
        serde_json::json!([0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    );

    let generic = data_path("arm6_generic.json");
    let out = dynsolve(&[
        "components",
        "--config",
        path_str(&generic),
        "--q",
        "0,0,0,0,0,0",
    ]);
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value.get("currents").is_none());
}

#[test]
fn components_exit_codes() {
    let cfg = data_path("two_link_generic.json");
    let c = path_str(&cfg);
    assert_eq!(
        code(&dynsolve(&["components", "--config", c, "--q", "0,abc"])),
        3
    );
    assert_eq!(
        code(&dynsolve(&["components", "--config", c, "--q", "0,0,0"])),
        3
    );
    assert_eq!(
        code(&dynsolve(&[
            "components",
            "--config",
            c,
            "--q",
            "0,0",
            "--qdd",
            "1e308,0"
        ])),
        5
    );

    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "nonexistent");
    let out = dynsolve(&[
        "components",
        "--config",
        path_str(&unknown),
        "--q",
        "0,0,0,0,0,0",
    ]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("generic"));
}

#[test]
fn trajectory_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let out = dynsolve(&[
        "gen-traj",
        "--dof",
        "6",
        "--duration",
        "0.5",
        "--amplitude",
        "0.4,0.3,0.3,0.2,0.2,0.2",
        "--frequency",
        "0.5",
        "--phase",
        "-0.1",
        "--output",
        path_str(&traj),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cfg = data_path("arm6_franka_friction_placeholder.json");
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let report = dir.path().join(name);
        let out = dynsolve(&[
            "trajectory",
            "--config",
            path_str(&cfg),
            "--input",
            path_str(&traj),
            "--output",
            path_str(&report),
            "--check-limits",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((
            std::fs::read(report.with_extension("csv")).unwrap(),
            std::fs::read(report.with_extension("json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().count(), 52);
    let summary: Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(summary["sample_count"], 51);
    assert_eq!(summary["plugin_name"], "franka-friction");
}

#[test]
fn trajectory_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data_path("two_link_generic.json");
    let c = path_str(&cfg);
    let report = dir.path().join("report");
    let r = path_str(&report);
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };

    let backwards = write(
        "back.csv",
        "t,q0,q1,qd0,qd1,qdd0,qdd1\n0,0,0,0,0,0,0\n0,0,0,0,0,0,0\n",
    );
    let out = dynsolve(&[
        "trajectory",
        "--config",
        c,
        "--input",
        path_str(&backwards),
        "--output",
        r,
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));

    let no_acc = write("noacc.csv", "t,q0,q1,qd0,qd1\n0,0,0,0,0\n1,0,0,1,1\n");
    assert_eq!(
        code(&dynsolve(&[
            "trajectory",
            "--config",
            c,
            "--input",
            path_str(&no_acc),
            "--output",
            r
        ])),
        3
    );
    let out = dynsolve(&[
        "trajectory",
        "--config",
        c,
        "--input",
        path_str(&no_acc),
        "--output",
        r,
        "--differentiate",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let currents = write(
        "cur.csv",
        "# units=current\nt,q0,q1,qd0,qd1,qdd0,qdd1,tau0,tau1\n0,0,0,0,0,0,0,1,1\n",
    );
    assert_eq!(
        code(&dynsolve(&[
            "trajectory",
            "--config",
            c,
            "--input",
            path_str(&currents),
            "--output",
            r
        ])),
        4
    );

    let fast = write("fast.csv", "t,q0,q1,qd0,qd1,qdd0,qdd1\n0,0,9,0,0,0,0\n");
    let limited = dynsolve(&[
        "trajectory",
        "--config",
        c,
        "--input",
        path_str(&fast),
        "--output",
        r,
        "--check-limits",
    ]);
    assert_eq!(code(&limited), 3);

    let huge = write(
        "huge.csv",
        "t,q0,q1,qd0,qd1,qdd0,qdd1\n0,0,0,0,0,1e308,1e308\n",
    );
    assert_eq!(
        code(&dynsolve(&[
            "trajectory",
            "--config",
            c,
            "--input",
            path_str(&huge),
            "--output",
            r
        ])),
        5
    );

    let missing = dir.path().join("missing.csv");
    assert_eq!(
        code(&dynsolve(&[
            "trajectory",
            "--config",
            c,
            "--input",
            path_str(&missing),
            "--output",
            r
        ])),
        3
    );
}

#[test]
fn gen_traj_rejects_bad_lists() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = path_str(&out);
    let args = [
        "gen-traj",
        "--dof",
        "3",
        "--duration",
        "1",
        "--frequency",
        "1",
        "--output",
        o,
    ];
    assert_eq!(
        code(&dynsolve(&[&args[..], &["--amplitude", "1,2"]].concat())),
        3
    );
    assert_eq!(
        code(&dynsolve(&[&args[..], &["--amplitude", "x"]].concat())),
        2
    );
    assert_eq!(
        code(&dynsolve(&[&args[..], &["--amplitude", "-0.5"]].concat())),
        0
    );
}
