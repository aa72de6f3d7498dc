import json

import pytest

from gridhouse.registry import (FLOOR_CATEGORY, STATE_ORDER, data_dir,
                                generate_ids_lock, load_registry)


def test_loads_and_counts(registry):
    assert len(registry.objects) >= 40
    assert len(registry.furniture) >= 12
    assert FLOOR_CATEGORY in registry.furniture


def test_categories_cover_all_task_needs(registry):
    for name in ("printer", "book", "rag", "soap", "broom", "plate", "teapot",
                 "plywood", "lemon", "hamburger", "pot_plant", "carton"):
        assert name in registry.objects, name
    for name in ("table", "cabinet", "sink", "stove", "refrigerator", "shelf",
                 "bed", "countertop", "trash_can", "bucket", "box"):
        assert name in registry.furniture, name


def test_state_order_is_fixed():
    assert STATE_ORDER == ("Cooked", "Dusty", "Frozen", "Opened", "Sliced",
                           "Soaked", "Stained", "ToggledOn")


def test_capability_table(registry):
    printer = registry.objects["printer"]
    assert printer.can_hold("ToggledOn")
    assert not printer.can_hold("Sliced")
    apple = registry.objects["apple"]
    assert apple.can_hold("Sliced") and apple.can_hold("Frozen") and apple.can_hold("Cooked")
    assert not apple.can_hold("ToggledOn")
    car = registry.objects["car"]
    assert not car.movable and car.can_hold("Dusty")
    cabinet = registry.furniture["cabinet"]
    assert cabinet.container and cabinet.openable and cabinet.can_hold("Opened")
    floor = registry.furniture[FLOOR_CATEGORY]
    assert floor.height == 0 and floor.can_hold("Dusty")


def test_heights_within_grid(registry):
    for spec in registry.furniture.values():
        assert 0 <= spec.height <= 3


def test_ids_lock_matches_registry_order():
    lock = generate_ids_lock(data_dir() / "registry.json")
    shipped = json.loads((data_dir() / "ids.lock.json").read_text())
    assert lock == shipped


def test_ids_are_dense_and_nonzero(registry):
    obj_ids = sorted(registry.object_ids.values())
    assert obj_ids == list(range(1, len(obj_ids) + 1))
    furn_ids = sorted(registry.furniture_ids.values())
    assert furn_ids == list(range(1, len(furn_ids) + 1))


def test_missing_lock_entry_rejected(tmp_path):
    reg = json.loads((data_dir() / "registry.json").read_text())
    lock = generate_ids_lock(data_dir() / "registry.json")
    del lock["objects"]["printer"]
    (tmp_path / "registry.json").write_text(json.dumps(reg))
    (tmp_path / "ids.lock.json").write_text(json.dumps(lock))
    with pytest.raises(Exception, match="printer"):
        load_registry(tmp_path)
