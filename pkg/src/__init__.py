# csrr-rec package
