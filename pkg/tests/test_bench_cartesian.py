from gridhouse.cli import bench_once


def test_bench_cartesian_mode_runs():
    report = bench_once("preparing_salad", 10, 1000, action_mode="cartesian")
    assert report["steps"] == 1000
    assert report["action_mode"] == "cartesian"
    assert report["steps_per_second"] > 0


def test_bench_cartesian_small_space_task():
    # dimension (10) below the primitive count must not break sampling
    report = bench_once("installing_a_printer", 10, 1000, action_mode="cartesian")
    assert report["steps"] == 1000
