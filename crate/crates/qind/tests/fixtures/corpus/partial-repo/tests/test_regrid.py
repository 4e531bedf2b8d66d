from regrid import regrid


def test_identity():
    assert regrid(1, None) == 1
