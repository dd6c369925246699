# shared between conftest and the acceptance tests
RESULTS: dict[str, str] = {}
