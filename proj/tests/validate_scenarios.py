"""Validate the bundled scenarios against the schema printed by `tubemass schema`."""
import json
import pathlib
import subprocess
import sys

import jsonschema

tubemass, scenarios = sys.argv[1], pathlib.Path(sys.argv[2])
schema = json.loads(subprocess.run([tubemass, "schema"], check=True, capture_output=True, text=True).stdout)
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)
bad = 0
for path in sorted(scenarios.glob("*.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    for e in errors:
        print(f"{path.name}: {e.json_path}: {e.message}")
    bad += bool(errors)
print(f"{len(list(scenarios.glob('*.json')))} scenarios, {bad} invalid")
sys.exit(1 if bad else 0)
