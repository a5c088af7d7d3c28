from taxosim.cli import main_entry

main_entry()
