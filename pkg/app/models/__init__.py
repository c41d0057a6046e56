# Domain Models Package
