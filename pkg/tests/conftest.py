from hypothesis import settings

settings.register_profile("lipeq", max_examples=200, derandomize=True, deadline=None)
settings.load_profile("lipeq")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
