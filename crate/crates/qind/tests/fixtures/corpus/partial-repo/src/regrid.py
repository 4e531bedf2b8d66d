def regrid(field, target):
    return field
