""" Simple smoke tests. """


def test_limes_toolkit__can_be_imported() -> None:
    # pylint:disable=unused-import,import-outside-toplevel
    import limes_toolkit
    import limes_toolkit.bench
    import limes_toolkit.cli
    import limes_toolkit.linop
    import limes_toolkit.model
    import limes_toolkit.proximal
    import limes_toolkit.solvers
